#include "adg/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adg/parallel.hpp"

namespace adg {

namespace {

// Rows a(x)_i = phi_i(x) / sqrt(lambda_i) over the selected indices;
// the signature energy is a nearest-neighbor problem between the
// sign-flipped and plain embeddings.
Eigen::MatrixXd commute_embedding(const SpectralDecomposition& spec,
                                  const std::vector<int>& indices) {
  const int n = spec.vertex_count;
  Eigen::MatrixXd emb(n, static_cast<int>(indices.size()));
  for (int c = 0; c < static_cast<int>(indices.size()); ++c) {
    const int i = indices[static_cast<std::size_t>(c)];
    if (!(spec.eigenvalues(i) > 0.0))
      throw DisconnectedError("eigenvalue " + std::to_string(i) +
                              " is not positive; signature energy undefined");
    emb.col(c) = spec.eigenvectors.col(i) / std::sqrt(spec.eigenvalues(i));
  }
  return emb;
}

std::vector<int> default_indices(const SpectralDecomposition& spec, int K) {
  if (spec.pair_count() < K + 1)
    throw InvalidArgumentError("need at least K + 1 = " + std::to_string(K + 1) + " eigenpairs");
  std::vector<int> indices(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) indices[static_cast<std::size_t>(i)] = i + 1;
  return indices;
}

// Per-vertex squared nearest-neighbor distance and argmin between the
// flipped embedding rows and the plain embedding.
void nearest_rows(const Eigen::MatrixXd& flipped, const Eigen::MatrixXd& emb,
                  Eigen::VectorXd* min_d2, std::vector<int>* argmin, int threads) {
  const int n = static_cast<int>(emb.rows());
  const Eigen::VectorXd norms = emb.rowwise().squaredNorm();
  min_d2->resize(n);
  if (argmin) argmin->assign(static_cast<std::size_t>(n), 0);

  constexpr int kBlock = 256;
  const int blocks = (n + kBlock - 1) / kBlock;
  parallel_for(
      blocks,
      [&](std::int64_t blk) {
        const int begin = static_cast<int>(blk) * kBlock;
        const int end = std::min(begin + kBlock, n);
        const Eigen::MatrixXd cross = flipped.middleRows(begin, end - begin) * emb.transpose();
        for (int x = begin; x < end; ++x) {
          const double fx = flipped.row(x).squaredNorm();
          int best = 0;
          double best_d = std::numeric_limits<double>::infinity();
          for (int y = 0; y < n; ++y) {
            const double d = fx + norms(y) - 2.0 * cross(x - begin, y);
            if (d < best_d) {
              best_d = d;
              best = y;
            }
          }
          // The expanded form cancels near zero; settle the winner with
          // the exact difference.
          (*min_d2)(x) = (flipped.row(x) - emb.row(best)).squaredNorm();
          if (argmin) (*argmin)[static_cast<std::size_t>(x)] = best;
        }
      },
      threads);
}

Eigen::MatrixXd apply_signs(const Eigen::MatrixXd& emb, const SignSignature& signature) {
  Eigen::MatrixXd flipped = emb;
  for (int c = 0; c < signature.size(); ++c)
    if (signature.signs[static_cast<std::size_t>(c)] < 0) flipped.col(c) *= -1.0;
  return flipped;
}

double energy_impl(const SpectralDecomposition& spec, const SignSignature& signature,
                   const Eigen::VectorXd& area_weights, const std::vector<int>& indices,
                   int threads) {
  const Eigen::MatrixXd emb = commute_embedding(spec, indices);
  const Eigen::MatrixXd flipped = apply_signs(emb, signature);
  Eigen::VectorXd min_d2;
  nearest_rows(flipped, emb, &min_d2, nullptr, threads);
  return area_weights.dot(min_d2);
}

}  // namespace

double signature_energy(const SpectralDecomposition& spec, const SignSignature& signature,
                        const Eigen::VectorXd& area_weights, int threads) {
  if (area_weights.size() != spec.vertex_count)
    throw DimensionMismatchError("area weight count does not match the decomposition");
  return energy_impl(spec, signature, area_weights, default_indices(spec, signature.size()),
                     threads);
}

std::vector<int> recover_map(const SpectralDecomposition& spec, const SignSignature& signature,
                             int threads) {
  const Eigen::MatrixXd emb = commute_embedding(spec, default_indices(spec, signature.size()));
  const Eigen::MatrixXd flipped = apply_signs(emb, signature);
  Eigen::VectorXd min_d2;
  std::vector<int> argmin;
  nearest_rows(flipped, emb, &min_d2, &argmin, threads);
  return argmin;
}

SymmetryResult detect_symmetries(const SpectralDecomposition& spec, int K, int top,
                                 const Eigen::VectorXd& area_weights, bool drop_multiplets,
                                 int threads) {
  if (K < 1) throw InvalidArgumentError("K must be >= 1");
  if (area_weights.size() != spec.vertex_count)
    throw DimensionMismatchError("area weight count does not match the decomposition");

  SymmetryResult result;
  std::vector<int> indices = default_indices(spec, K);
  for (int i : indices)
    if (spec.is_multiplet(i)) result.degenerate_warning = true;
  if (drop_multiplets) {
    std::vector<int> kept;
    for (int i : indices)
      if (!spec.is_multiplet(i)) kept.push_back(i);
    if (kept.empty()) throw InvalidArgumentError("all requested eigenfunctions sit in multiplets");
    indices = std::move(kept);
  }
  result.used_indices = indices;
  const int k_eff = static_cast<int>(indices.size());

  const Eigen::MatrixXd emb = commute_embedding(spec, indices);
  const long count = (1L << k_eff) - 1;
  std::vector<SymmetryCandidate> candidates(static_cast<std::size_t>(count));

  // One signature per worker; the inner nearest-neighbor scan stays
  // serial so results do not depend on the thread count.
  parallel_for(
      count,
      [&](std::int64_t j) {
        const long bits = j + 1;  // 0 would be the identity signature
        SignSignature sig;
        sig.signs.resize(static_cast<std::size_t>(k_eff));
        for (int i = 0; i < k_eff; ++i)
          sig.signs[static_cast<std::size_t>(i)] = (bits >> i) & 1 ? -1 : 1;
        const Eigen::MatrixXd flipped = apply_signs(emb, sig);
        Eigen::VectorXd min_d2;
        std::vector<int> argmin;
        nearest_rows(flipped, emb, &min_d2, &argmin, 1);
        auto& cand = candidates[static_cast<std::size_t>(j)];
        cand.signature = std::move(sig);
        cand.energy = area_weights.dot(min_d2);
        cand.map = std::move(argmin);
      },
      threads);

  std::vector<int> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return candidates[static_cast<std::size_t>(a)].energy < candidates[static_cast<std::size_t>(b)].energy;
  });
  const int keep = std::min<long>(top, count);
  for (int i = 0; i < keep; ++i)
    result.candidates.push_back(std::move(candidates[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]));
  return result;
}

namespace ref {

double signature_energy(const SpectralDecomposition& spec, const SignSignature& signature,
                        const Eigen::VectorXd& area_weights) {
  // Plain quadratic scan, one vertex at a time.
  const int n = spec.vertex_count;
  const int K = signature.size();
  if (spec.pair_count() < K + 1)
    throw InvalidArgumentError("need at least K + 1 eigenpairs");
  double energy = 0.0;
  for (int x = 0; x < n; ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (int y = 0; y < n; ++y) {
      double sum = 0.0;
      for (int i = 1; i <= K; ++i) {
        const double s = signature.signs[static_cast<std::size_t>(i - 1)];
        const double d = s * spec.eigenvectors(x, i) - spec.eigenvectors(y, i);
        sum += d * d / spec.eigenvalues(i);
      }
      best = std::min(best, sum);
    }
    energy += area_weights(x) * best;
  }
  return energy;
}

}  // namespace ref

}  // namespace adg
