#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "adg/eigensolver.hpp"

namespace adg {

// Multi-scale diagonal heat kernel values per vertex.
struct HksDescriptor {
  Eigen::MatrixXd values;  // n x scale count, strictly positive
  std::vector<double> scales;

  int vertex_count() const { return static_cast<int>(values.rows()); }
  int scale_count() const { return static_cast<int>(values.cols()); }
};

// Six scales 1024 * 2^{2k/5}, k = 0..5.
std::vector<double> default_hks_scales();

// Exponent convention for the diffusion distance. The scaled form
// e^{-2 lambda t} is the one consistent with the commute-time identity
// 2 int d_t^2 dt = sum (1/lambda)(...)^2; the literal form e^{-lambda t}
// is kept as a compatibility switch.
enum class DiffusionExponent { scaled_2t, literal_t };

double heat_kernel(const SpectralDecomposition& spec, int x, int y, double t);

HksDescriptor hks(const SpectralDecomposition& spec, std::vector<double> scales, int threads = 0);

double diffusion_distance(const SpectralDecomposition& spec, int x, int y, double t,
                          DiffusionExponent exponent = DiffusionExponent::scaled_2t);

double commute_time(const SpectralDecomposition& spec, int x, int y);

// Commute-time distances from x to every vertex.
Eigen::VectorXd commute_time_row(const SpectralDecomposition& spec, int x);

// Pairwise commute-time distances between the sampled vertices.
Eigen::MatrixXd commute_time_matrix(const SpectralDecomposition& spec, std::span<const int> ids,
                                    int threads = 0);

namespace ref {
HksDescriptor hks(const SpectralDecomposition& spec, std::vector<double> scales);
}  // namespace ref

}  // namespace adg
