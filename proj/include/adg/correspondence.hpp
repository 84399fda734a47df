#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "adg/diffusion.hpp"
#include "adg/mesh.hpp"

namespace adg {

// Finite metric space sampled from a mesh: vertex ids plus their
// pairwise distance matrix (symmetric, zero diagonal, non-negative,
// triangle inequality within 1e-8 slack).
struct SampledMetricSpace {
  std::vector<int> ids;
  Eigen::MatrixXd D;
  std::string source;

  int size() const { return static_cast<int>(ids.size()); }
};

SampledMetricSpace make_sampled_space(std::vector<int> ids, Eigen::MatrixXd D,
                                      std::string source);

// Index pairs into the two sample lists, surjective onto both sides.
struct Correspondence {
  std::vector<std::pair<int, int>> pairs;
};

Correspondence identity_correspondence(int size);

// max over (x,y), (x',y') in C of |d_X(x,x') - d_Y(y,y')|.
double distortion(const Correspondence& c, const SampledMetricSpace& X,
                  const SampledMetricSpace& Y);

struct GhResult {
  double dgh = 0.0;  // half of the minimal distortion
  Correspondence best;
};

// Exhaustive minimum over surjective correspondences (branch and bound
// over map/comap assignments, pruned on the running maximum). Hard size
// cap 7 per side.
GhResult gromov_hausdorff_bruteforce(const SampledMetricSpace& X, const SampledMetricSpace& Y,
                                     int max_size = 7);

struct MatchReport {
  double distortion = 0.0;
  std::vector<double> stresses;  // |d_X - d_Y| over unordered pairs of C
};

MatchReport evaluate_matching(const SampledMetricSpace& X, const SampledMetricSpace& Y,
                              const Correspondence& c);

// Greedy farthest-point sampling under the commute-time metric; the
// first point is seed % n. Ties go to the smallest vertex id.
std::vector<int> farthest_point_sample(const TriangleMesh& mesh,
                                       const SpectralDecomposition& spec, int count,
                                       std::uint64_t seed);

}  // namespace adg
