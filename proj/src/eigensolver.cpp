#include "adg/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "adg/rng.hpp"

namespace adg {

namespace {

double inf_norm(const Eigen::SparseMatrix<double>& M) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(M.rows());
  for (int col = 0; col < M.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, col); it; ++it)
      row_sums(it.row()) += std::abs(it.value());
  return row_sums.maxCoeff();
}

std::vector<char> flag_multiplets(const Eigen::VectorXd& lambda) {
  const int k = static_cast<int>(lambda.size());
  std::vector<char> flags(static_cast<std::size_t>(k), 0);
  for (int i = 0; i + 1 < k; ++i) {
    const double scale = std::max(std::abs(lambda(i)), std::abs(lambda(i + 1)));
    if (scale > 0.0 && std::abs(lambda(i + 1) - lambda(i)) <= 1e-6 * scale) {
      flags[static_cast<std::size_t>(i)] = 1;
      flags[static_cast<std::size_t>(i + 1)] = 1;
    }
  }
  return flags;
}

void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  int idx = 0;
  double best = -1.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best) {
      best = a;
      idx = i;
    }
  }
  if (v(idx) < 0.0) v = -v;
}

}  // namespace

SpectralDecomposition smallest_eigenpairs(const FemSystem& system, int k, double tol) {
  const int n = system.vertex_count;
  if (k < 1 || k > n)
    throw InvalidArgumentError("requested " + std::to_string(k) + " eigenpairs from a system of size " +
                               std::to_string(n));
  if (!(tol > 0.0)) throw InvalidArgumentError("tolerance must be positive");

  const Eigen::SparseMatrix<double>& A = system.stiffness;
  const Eigen::SparseMatrix<double>& B = system.mass;
  const double norm_a = inf_norm(A);

  // The shift keeps A - sigma B well conditioned despite the zero
  // eigenvalue; too small a magnitude (1e-8 of the mean diagonal) puts
  // the triangular-solve error floor above usable tolerances.
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += A.coeff(i, i);
  double sigma = -1e-4 * (trace > 0.0 ? trace / n : 1.0);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  {
    int attempt = 0;
    for (;;) {
      Eigen::SparseMatrix<double> shifted = A - sigma * B;
      solver.compute(shifted);
      if (solver.info() == Eigen::Success) break;
      if (++attempt > 3)
        throw FactorizationError("shifted stiffness matrix could not be factorized");
      sigma *= 2.0;
    }
  }

  const int budget = std::min(10 * k, n);
  const int check_every = 10;

  // Sturm count: eigenvalues of the (A, B) pencil strictly below mu,
  // from the inertia of A - mu B. Returns -1 when the factorization is
  // unusable at this mu.
  auto pencil_count_below = [&](double mu) -> int {
    Eigen::SparseMatrix<double> shifted_mu = A - mu * B;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted_mu);
    if (ldlt.info() != Eigen::Success) return -1;
    int negatives = 0;
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double d = ldlt.vectorD()(i);
      if (!std::isfinite(d)) return -1;
      negatives += d < 0.0 ? 1 : 0;
      min_abs = std::min(min_abs, std::abs(d));
    }
    if (min_abs == 0.0) return -1;
    return negatives;
  };

  // Residual convergence alone cannot see a still-missing copy of a
  // tight cluster, so verify the count below the boundary cluster's
  // floor against the factorization inertia.
  auto multiplicity_verified = [&](const Eigen::VectorXd& lam) -> bool {
    const double gap_tol = 1e-7 * (lam(k - 1) - sigma);
    int j = k - 1;
    while (j > 0 && lam(j) - lam(j - 1) < gap_tol) --j;
    if (j == 0) return true;  // one cluster from the bottom up
    const double mu = 0.5 * (lam(j - 1) + lam(j));
    return pencil_count_below(mu) == j;
  };

  // Lanczos basis (B-orthonormal), the cached products B v_j, and the
  // projected operator H(i, j) = <v_i, Op v_j>_B. H is recorded from the
  // reorthogonalization coefficients rather than assumed tridiagonal:
  // the inexactly solved operator is not exactly self-adjoint, and the
  // symmetry assumption costs digits after the 1/theta transform.
  Eigen::MatrixXd V(n, budget);
  Eigen::MatrixXd BV(n, budget);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(budget, budget);

  Rng rng(static_cast<std::uint64_t>(n));
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  Eigen::VectorXd bv = B * v;
  v /= std::sqrt(v.dot(bv));
  bv = B * v;
  V.col(0) = v;
  BV.col(0) = bv;

  Eigen::VectorXd lambda;
  Eigen::MatrixXd vectors;
  bool converged = false;
  int m = 0;              // number of completed Lanczos vectors
  double op_scale = 0.0;  // running estimate of |Op| from the recurrence

  auto try_extract = [&](int steps) {
    if (steps < k) return false;
    const Eigen::MatrixXd Hm =
        0.5 * (H.topLeftCorner(steps, steps) + H.topLeftCorner(steps, steps).transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hm);
    if (es.info() != Eigen::Success) return false;

    // Largest theta of the shift-inverted operator <-> smallest lambda.
    Eigen::VectorXd theta(k);
    Eigen::MatrixXd S(steps, k);
    for (int i = 0; i < k; ++i) {
      theta(i) = es.eigenvalues()(steps - 1 - i);
      S.col(i) = es.eigenvectors().col(steps - 1 - i);
    }
    if (theta(k - 1) <= 0.0) return false;

    Eigen::MatrixXd X = V.leftCols(steps) * S;
    Eigen::VectorXd lam(k);
    for (int i = 0; i < k; ++i) lam(i) = sigma + 1.0 / theta(i);

    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd x = X.col(i);
      const double res = (A * x - lam(i) * (B * x)).norm();
      if (res > tol * norm_a) return false;
    }
    if (steps < n && !multiplicity_verified(lam)) return false;
    lambda = lam;
    vectors = X;
    return true;
  };

  const Eigen::SparseMatrix<double> shifted = A - sigma * B;
  for (int j = 0; j < budget; ++j) {
    Eigen::VectorXd w = solver.solve(BV.col(j));
    if (solver.info() != Eigen::Success)
      throw FactorizationError("triangular solve failed in the Lanczos iteration");
    // One step of iterative refinement keeps the operator accurate even
    // when the shifted matrix is poorly conditioned.
    w += solver.solve(BV.col(j) - shifted * w);

    // Full reorthogonalization against every previous basis vector, two
    // sweeps; the accumulated coefficients are the projection column.
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (int i = 0; i <= j; ++i) {
        const double c = w.dot(BV.col(i));
        w -= c * V.col(i);
        H(i, j) += c;
      }
    }

    m = j + 1;
    if (m % check_every == 0 || m == budget || m == n) {
      if (try_extract(m)) {
        converged = true;
        break;
      }
      if (m == n) break;
    }

    if (j + 1 >= budget) break;

    Eigen::VectorXd bw = B * w;
    double b_j = std::sqrt(std::max(w.dot(bw), 0.0));
    op_scale = std::max({op_scale, std::abs(H(j, j)), b_j});
    if (b_j <= 1e-12 * op_scale) {
      // Remainder is round-off: an invariant subspace (up to noise) was
      // found. Restart with a fresh direction; the dropped coupling is
      // below the recorded-H noise floor.
      for (int i = 0; i < n; ++i) w(i) = rng.normal();
      for (int sweep = 0; sweep < 2; ++sweep) {
        for (int i = 0; i <= j; ++i) {
          const double c = w.dot(BV.col(i));
          w -= c * V.col(i);
        }
      }
      bw = B * w;
      b_j = std::sqrt(std::max(w.dot(bw), 0.0));
      if (b_j <= 0.0) break;  // basis exhausted
    } else {
      H(j + 1, j) = b_j;
    }

    v = w / b_j;
    V.col(j + 1) = v;
    BV.col(j + 1) = B * v;
  }

  if (!converged && !try_extract(m))
    throw ConvergenceError("Lanczos did not reach tolerance within " + std::to_string(budget) +
                           " steps");

  SpectralDecomposition out;
  out.vertex_count = n;
  out.mode = system.mode;
  out.eigenvalues = lambda;
  out.eigenvectors = vectors;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd x = out.eigenvectors.col(i);
    const double bnorm = std::sqrt(x.dot(B * x));
    if (bnorm > 0.0) x /= bnorm;
    normalize_sign(x);
    out.eigenvectors.col(i) = x;
  }
  out.multiplet = flag_multiplets(out.eigenvalues);
  return out;
}

}  // namespace adg
