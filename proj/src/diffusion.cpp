#include "adg/diffusion.hpp"

#include <cmath>
#include <string>

#include "adg/parallel.hpp"

namespace adg {

namespace {

void require_connected(const SpectralDecomposition& spec) {
  if (spec.pair_count() < 2 || !(spec.eigenvalues(1) > 0.0))
    throw DisconnectedError("lambda_1 is not positive; mesh appears disconnected");
  if (spec.pair_count() >= 3 && spec.eigenvalues(1) < 1e-8 * spec.eigenvalues(2))
    throw DisconnectedError("lambda_1 << lambda_2 suggests a disconnected mesh");
}

}  // namespace

std::vector<double> default_hks_scales() {
  std::vector<double> scales(6);
  for (int k = 0; k < 6; ++k) scales[static_cast<std::size_t>(k)] = 1024.0 * std::pow(2.0, 2.0 * k / 5.0);
  return scales;
}

double heat_kernel(const SpectralDecomposition& spec, int x, int y, double t) {
  if (!(t > 0.0)) throw InvalidArgumentError("heat kernel time must be positive");
  double sum = 0.0;
  for (int i = 0; i < spec.pair_count(); ++i)
    sum += std::exp(-spec.eigenvalues(i) * t) * spec.eigenvectors(x, i) * spec.eigenvectors(y, i);
  return sum;
}

namespace {

HksDescriptor hks_impl(const SpectralDecomposition& spec, std::vector<double> scales, int threads) {
  if (scales.empty()) throw InvalidArgumentError("hks needs at least one scale");
  for (std::size_t s = 0; s < scales.size(); ++s) {
    if (!(scales[s] > 0.0)) throw InvalidArgumentError("hks scales must be positive");
    if (s > 0 && !(scales[s] > scales[s - 1]))
      throw InvalidArgumentError("hks scales must be ascending");
  }

  const int n = spec.vertex_count;
  const int ns = static_cast<int>(scales.size());
  HksDescriptor out;
  out.scales = scales;
  out.values.resize(n, ns);
  parallel_for(
      n,
      [&](std::int64_t x) {
        for (int s = 0; s < ns; ++s) {
          double sum = 0.0;
          const double t = out.scales[static_cast<std::size_t>(s)];
          for (int i = 0; i < spec.pair_count(); ++i) {
            const double phi = spec.eigenvectors(x, i);
            sum += std::exp(-spec.eigenvalues(i) * t) * phi * phi;
          }
          out.values(x, s) = sum;
        }
      },
      threads);
  return out;
}

}  // namespace

HksDescriptor hks(const SpectralDecomposition& spec, std::vector<double> scales, int threads) {
  return hks_impl(spec, std::move(scales), threads);
}

namespace ref {

HksDescriptor hks(const SpectralDecomposition& spec, std::vector<double> scales) {
  return hks_impl(spec, std::move(scales), 1);
}

}  // namespace ref

double diffusion_distance(const SpectralDecomposition& spec, int x, int y, double t,
                          DiffusionExponent exponent) {
  if (!(t > 0.0)) throw InvalidArgumentError("diffusion time must be positive");
  const double factor = exponent == DiffusionExponent::scaled_2t ? 2.0 : 1.0;
  double sum = 0.0;
  for (int i = 1; i < spec.pair_count(); ++i) {
    const double d = spec.eigenvectors(x, i) - spec.eigenvectors(y, i);
    sum += std::exp(-factor * spec.eigenvalues(i) * t) * d * d;
  }
  return std::sqrt(sum);
}

double commute_time(const SpectralDecomposition& spec, int x, int y) {
  require_connected(spec);
  double sum = 0.0;
  for (int i = 1; i < spec.pair_count(); ++i) {
    const double d = spec.eigenvectors(x, i) - spec.eigenvectors(y, i);
    sum += d * d / spec.eigenvalues(i);
  }
  return std::sqrt(sum);
}

Eigen::VectorXd commute_time_row(const SpectralDecomposition& spec, int x) {
  require_connected(spec);
  const int n = spec.vertex_count;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 1; i < spec.pair_count(); ++i) {
    const double inv = 1.0 / spec.eigenvalues(i);
    const double phix = spec.eigenvectors(x, i);
    for (int y = 0; y < n; ++y) {
      const double d = spec.eigenvectors(y, i) - phix;
      out(y) += inv * d * d;
    }
  }
  return out.array().sqrt();
}

Eigen::MatrixXd commute_time_matrix(const SpectralDecomposition& spec, std::span<const int> ids,
                                    int threads) {
  require_connected(spec);
  const int m = static_cast<int>(ids.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
  parallel_for(
      m,
      [&](std::int64_t r) {
        for (int c = 0; c < m; ++c) {
          if (c == static_cast<int>(r)) continue;
          D(r, c) = commute_time(spec, ids[static_cast<std::size_t>(r)], ids[static_cast<std::size_t>(c)]);
        }
      },
      threads);
  return D;
}

}  // namespace adg
