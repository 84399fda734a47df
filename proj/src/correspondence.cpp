#include "adg/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adg {

SampledMetricSpace make_sampled_space(std::vector<int> ids, Eigen::MatrixXd D,
                                      std::string source) {
  const int m = static_cast<int>(ids.size());
  if (D.rows() != m || D.cols() != m)
    throw DimensionMismatchError("distance matrix does not match the sample size");
  const double scale = m > 0 ? D.cwiseAbs().maxCoeff() : 0.0;
  const double slack = 1e-8 * std::max(scale, 1.0);
  for (int i = 0; i < m; ++i) {
    if (D(i, i) != 0.0) throw InvalidMetricError("distance matrix has a nonzero diagonal");
    for (int j = 0; j < m; ++j) {
      if (D(i, j) < 0.0) throw InvalidMetricError("distance matrix has a negative entry");
      if (D(i, j) != D(j, i)) throw InvalidMetricError("distance matrix is not symmetric");
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        if (D(i, j) > D(i, k) + D(k, j) + slack)
          throw InvalidMetricError("triangle inequality violated beyond tolerance");

  SampledMetricSpace space;
  space.ids = std::move(ids);
  space.D = std::move(D);
  space.source = std::move(source);
  return space;
}

Correspondence identity_correspondence(int size) {
  Correspondence c;
  c.pairs.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) c.pairs.emplace_back(i, i);
  return c;
}

namespace {

void require_valid(const Correspondence& c, const SampledMetricSpace& X,
                   const SampledMetricSpace& Y) {
  std::vector<char> cx(static_cast<std::size_t>(X.size()), 0);
  std::vector<char> cy(static_cast<std::size_t>(Y.size()), 0);
  for (const auto& [i, j] : c.pairs) {
    if (i < 0 || i >= X.size() || j < 0 || j >= Y.size())
      throw InvalidCorrespondenceError("pair index out of range");
    cx[static_cast<std::size_t>(i)] = 1;
    cy[static_cast<std::size_t>(j)] = 1;
  }
  for (char f : cx)
    if (!f) throw InvalidCorrespondenceError("correspondence does not cover X");
  for (char f : cy)
    if (!f) throw InvalidCorrespondenceError("correspondence does not cover Y");
}

}  // namespace

double distortion(const Correspondence& c, const SampledMetricSpace& X,
                  const SampledMetricSpace& Y) {
  require_valid(c, X, Y);
  double worst = 0.0;
  for (const auto& [x, y] : c.pairs)
    for (const auto& [x2, y2] : c.pairs)
      worst = std::max(worst, std::abs(X.D(x, x2) - Y.D(y, y2)));
  return worst;
}

namespace {

// Branch and bound over the star form of a minimal covering: a map
// phi: X -> Y followed by a comap psi on the still-uncovered part of Y.
// Every covering contains a correspondence of this form with no larger
// distortion, so the minimum over them is the minimum over all
// correspondences.
struct GhSearch {
  const Eigen::MatrixXd& DX;
  const Eigen::MatrixXd& DY;
  int nx, ny;
  std::vector<std::pair<int, int>> current;
  std::vector<char> covered_y;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, int>> best_pairs;

  GhSearch(const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy)
      : DX(dx), DY(dy), nx(static_cast<int>(dx.rows())), ny(static_cast<int>(dy.rows())),
        covered_y(static_cast<std::size_t>(ny), 0) {}

  double pair_cost(int x, int y) const {
    double worst = 0.0;
    for (const auto& [px, py] : current)
      worst = std::max(worst, std::abs(DX(x, px) - DY(y, py)));
    return worst;
  }

  void finish(double dis) {
    if (dis < best) {
      best = dis;
      best_pairs = current;
    }
  }

  void assign_uncovered(std::size_t yi, double dis) {
    while (yi < covered_y.size() && covered_y[yi]) ++yi;
    if (yi == covered_y.size()) {
      finish(dis);
      return;
    }
    for (int x = 0; x < nx; ++x) {
      const double d = std::max(dis, pair_cost(x, static_cast<int>(yi)));
      if (d >= best) continue;
      current.emplace_back(static_cast<int>(x), static_cast<int>(yi));
      assign_uncovered(yi + 1, d);
      current.pop_back();
    }
  }

  void assign_x(int x, double dis) {
    if (x == nx) {
      assign_uncovered(0, dis);
      return;
    }
    for (int y = 0; y < ny; ++y) {
      const double d = std::max(dis, pair_cost(x, y));
      if (d >= best) continue;
      current.emplace_back(x, y);
      const bool was = covered_y[static_cast<std::size_t>(y)];
      covered_y[static_cast<std::size_t>(y)] = 1;
      assign_x(x + 1, d);
      covered_y[static_cast<std::size_t>(y)] = was;
      current.pop_back();
    }
  }
};

}  // namespace

GhResult gromov_hausdorff_bruteforce(const SampledMetricSpace& X, const SampledMetricSpace& Y,
                                     int max_size) {
  const int cap = std::min(max_size, 7);
  if (X.size() > cap || Y.size() > cap)
    throw SizeCapError("sample sizes " + std::to_string(X.size()) + "x" + std::to_string(Y.size()) +
                       " exceed the brute-force cap " + std::to_string(cap));
  if (X.size() == 0 || Y.size() == 0) throw InvalidArgumentError("empty metric space");

  GhSearch search(X.D, Y.D);
  search.assign_x(0, 0.0);

  GhResult result;
  result.dgh = 0.5 * search.best;
  result.best.pairs = search.best_pairs;
  std::sort(result.best.pairs.begin(), result.best.pairs.end());
  return result;
}

MatchReport evaluate_matching(const SampledMetricSpace& X, const SampledMetricSpace& Y,
                              const Correspondence& c) {
  require_valid(c, X, Y);
  MatchReport report;
  for (std::size_t a = 0; a < c.pairs.size(); ++a) {
    for (std::size_t b = a + 1; b < c.pairs.size(); ++b) {
      const auto& [x1, y1] = c.pairs[a];
      const auto& [x2, y2] = c.pairs[b];
      report.stresses.push_back(std::abs(X.D(x1, x2) - Y.D(y1, y2)));
    }
  }
  report.distortion = report.stresses.empty()
                          ? 0.0
                          : *std::max_element(report.stresses.begin(), report.stresses.end());
  return report;
}

std::vector<int> farthest_point_sample(const TriangleMesh& mesh,
                                       const SpectralDecomposition& spec, int count,
                                       std::uint64_t seed) {
  const int n = mesh.vertex_count();
  if (count < 1 || count > n)
    throw InvalidArgumentError("sample count must be in [1, vertex count]");

  std::vector<int> samples;
  samples.reserve(static_cast<std::size_t>(count));
  const int first = static_cast<int>(seed % static_cast<std::uint64_t>(n));
  samples.push_back(first);
  if (count == 1) return samples;

  Eigen::VectorXd dist = commute_time_row(spec, first);
  while (static_cast<int>(samples.size()) < count) {
    int next = 0;
    double best = -1.0;
    for (int v = 0; v < n; ++v) {
      if (dist(v) > best) {
        best = dist(v);
        next = v;
      }
    }
    samples.push_back(next);
    dist = dist.cwiseMin(commute_time_row(spec, next));
  }
  return samples;
}

}  // namespace adg
