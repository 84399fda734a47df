#pragma once

#include <vector>

#include <Eigen/Core>

#include "adg/fem.hpp"

namespace adg {

// k smallest eigenpairs of A alpha = lambda B alpha. Eigenvalues
// ascending; eigenvectors B-orthonormal with the largest-magnitude
// entry made positive so repeated runs agree bit-for-bit.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // k entries
  Eigen::MatrixXd eigenvectors;  // n x k
  int vertex_count = 0;
  MetricMode mode = MetricMode::euclidean;
  std::vector<char> multiplet;   // 1 where lambda_i sits in a cluster
                                 // closer than 1e-6 relative

  int pair_count() const { return static_cast<int>(eigenvalues.size()); }
  bool is_multiplet(int i) const { return multiplet[static_cast<std::size_t>(i)] != 0; }
};

// Shift-invert Lanczos in the B-inner product with full
// reorthogonalization; shift sigma = -1e-4 trace(A)/n, factorization
// retried with sigma doubled up to 3 times. Start vector is seeded from
// n, so identical inputs give identical output. Converged when every
// Ritz residual |A x - lambda B x| <= tol |A|_inf and the count below
// the boundary cluster matches the factorization inertia; iteration
// budget 10 k steps. Residuals bottom out near
// eps (lambda_k - sigma) / |sigma| |A|, so tolerances much below 1e-9
// may be unreachable on unit-scale meshes.
SpectralDecomposition smallest_eigenpairs(const FemSystem& system, int k, double tol = 1e-9);

}  // namespace adg
