#pragma once

#include <vector>

#include <Eigen/Core>

#include "adg/eigensolver.hpp"

namespace adg {

struct SignSignature {
  std::vector<int> signs;  // each +1 or -1

  int size() const { return static_cast<int>(signs.size()); }
  bool identity() const {
    for (int s : signs)
      if (s != 1) return false;
    return true;
  }
};

// E(s) = sum_x area(x) min_{x'} sum_{i=1..K} (1/lambda_i)
// (s_i phi_i(x) - phi_i(x'))^2, inner minimum brute-forced over all
// vertices.
double signature_energy(const SpectralDecomposition& spec, const SignSignature& signature,
                        const Eigen::VectorXd& area_weights, int threads = 0);

struct SymmetryCandidate {
  SignSignature signature;
  double energy = 0.0;
  std::vector<int> map;  // recovered correspondence f per vertex
};

struct SymmetryResult {
  std::vector<SymmetryCandidate> candidates;  // `top` lowest energies, ascending
  bool degenerate_warning = false;  // some lambda_1..K sits in a multiplet
  std::vector<int> used_indices;    // eigenfunction indices behind the signature slots
};

// Enumerates all 2^K - 1 non-identity signatures over the first K
// non-trivial eigenfunctions. drop_multiplets removes flagged
// eigenvalue indices from the signature (K shrinks).
SymmetryResult detect_symmetries(const SpectralDecomposition& spec, int K, int top,
                                 const Eigen::VectorXd& area_weights, bool drop_multiplets = false,
                                 int threads = 0);

// Recovered map for one signature: f(x) = argmin_{x'} ...
std::vector<int> recover_map(const SpectralDecomposition& spec, const SignSignature& signature,
                             int threads = 0);

namespace ref {
double signature_energy(const SpectralDecomposition& spec, const SignSignature& signature,
                        const Eigen::VectorXd& area_weights);
}  // namespace ref

}  // namespace adg
