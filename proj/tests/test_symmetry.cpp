#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "adg/rng.hpp"
#include "adg/shapes.hpp"
#include "adg/symmetry.hpp"
#include "adg/transform.hpp"

using namespace adg;

namespace {

struct Setup {
  TriangleMesh mesh;
  FemSystem sys;
  SpectralDecomposition spec;
  Eigen::VectorXd areas;
};

Setup prepare(TriangleMesh mesh, MetricMode mode, int k) {
  FemSystem sys = assemble(mesh, compute_metric_field(mesh, mode));
  SpectralDecomposition spec = smallest_eigenpairs(sys, k);
  Eigen::VectorXd areas = sys.lumped_mass();
  return {std::move(mesh), std::move(sys), std::move(spec), std::move(areas)};
}

// Sign of each eigenfunction under the vertex permutation: +1 when
// phi o pi = phi, -1 when phi o pi = -phi.
SignSignature classify_under_permutation(const Setup& s, const std::vector<int>& pi, int K) {
  SignSignature sig;
  for (int i = 1; i <= K; ++i) {
    double dot = 0.0;
    for (int v = 0; v < s.spec.vertex_count; ++v)
      dot += s.areas(v) * s.spec.eigenvectors(pi[static_cast<std::size_t>(v)], i) *
             s.spec.eigenvectors(v, i);
    sig.signs.push_back(dot >= 0.0 ? 1 : -1);
  }
  return sig;
}

}  // namespace

TEST_CASE("all-plus signature has exactly zero energy and the identity map") {
  const Setup s = prepare(fused_spheres(6), MetricMode::equi_affine, 6);
  SignSignature identity;
  identity.signs = {1, 1, 1, 1, 1};
  CHECK(signature_energy(s.spec, identity, s.areas) == 0.0);
  const std::vector<int> map = recover_map(s.spec, identity);
  for (int v = 0; v < s.spec.vertex_count; ++v) CHECK(map[static_cast<std::size_t>(v)] == v);
}

TEST_CASE("energies are non-negative") {
  const Setup s = prepare(bumped_blob(3, 5, 1.0), MetricMode::equi_affine, 6);
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    SignSignature sig;
    for (int i = 0; i < 5; ++i) sig.signs.push_back(rng.uniform() < 0.5 ? 1 : -1);
    CHECK(signature_energy(s.spec, sig, s.areas) >= 0.0);
  }
}

TEST_CASE("K = 1 enumerates a single candidate") {
  const Setup s = prepare(bumped_blob(3, 5, 1.0), MetricMode::equi_affine, 6);
  const SymmetryResult result = detect_symmetries(s.spec, 1, 5, s.areas);
  CHECK(result.candidates.size() == 1);
  CHECK(result.candidates[0].signature.signs == std::vector<int>{-1});
}

TEST_CASE("fused spheres: the mirror signature stands out") {
  const Setup s = prepare(fused_spheres(12), MetricMode::equi_affine, 6);
  const std::vector<int> mirror = mirror_vertex_map(s.mesh, 1e-9 * s.mesh.mean_edge_length());
  const int K = 5;
  const SignSignature mirror_sig = classify_under_permutation(s, mirror, K);
  REQUIRE_FALSE(mirror_sig.identity());  // some eigenfunctions must be odd

  const double mirror_energy = signature_energy(s.spec, mirror_sig, s.areas);
  double other_sum = 0.0;
  int other_count = 0;
  for (long bits = 1; bits < (1 << K); ++bits) {
    SignSignature sig;
    for (int i = 0; i < K; ++i) sig.signs.push_back((bits >> i) & 1 ? -1 : 1);
    if (sig.signs == mirror_sig.signs) continue;
    other_sum += signature_energy(s.spec, sig, s.areas);
    ++other_count;
  }
  const double other_mean = other_sum / other_count;
  CHECK(mirror_energy <= 0.05 * other_mean);

  SUBCASE("detect_symmetries ranks the mirror first and recovers the map") {
    const SymmetryResult result = detect_symmetries(s.spec, K, 3, s.areas);
    REQUIRE(result.candidates.size() == 3);
    CHECK(result.candidates[0].signature.signs == mirror_sig.signs);
    CHECK(result.candidates[0].energy == doctest::Approx(mirror_energy));
    int close = 0;
    const auto& f = result.candidates[0].map;
    for (int v = 0; v < s.mesh.vertex_count(); ++v) {
      if (s.mesh.graph_distance(f[static_cast<std::size_t>(v)], mirror[static_cast<std::size_t>(v)], 2) <= 2)
        ++close;
    }
    CHECK(close >= static_cast<int>(0.95 * s.mesh.vertex_count()));
  }
}

TEST_CASE("asymmetric blob has no low-energy signature") {
  const Setup sym = prepare(fused_spheres(12), MetricMode::equi_affine, 6);
  const std::vector<int> mirror = mirror_vertex_map(sym.mesh, 1e-9);
  const double benchmark =
      signature_energy(sym.spec, classify_under_permutation(sym, mirror, 5), sym.areas);

  // Bumps strong enough to kill the near-sphere's approximate
  // symmetries.
  const Setup asym = prepare(bumped_blob(29, 10, 1.0, 0.35, 10), MetricMode::equi_affine, 6);
  const SymmetryResult result = detect_symmetries(asym.spec, 5, 1, asym.areas);
  // Energies scale with commute-time units; normalize by surface area.
  const double scale_sym = sym.areas.sum();
  const double scale_asym = asym.areas.sum();
  CHECK(result.candidates[0].energy / scale_asym > 10.0 * benchmark / scale_sym);
}

TEST_CASE("energy multiset is invariant under stored sign flips") {
  const Setup s = prepare(fused_spheres(6), MetricMode::equi_affine, 6);
  const int K = 4;

  auto energies_of = [&](const SpectralDecomposition& spec) {
    std::vector<double> out;
    for (long bits = 0; bits < (1 << K); ++bits) {
      SignSignature sig;
      for (int i = 0; i < K; ++i) sig.signs.push_back((bits >> i) & 1 ? -1 : 1);
      out.push_back(signature_energy(spec, sig, s.areas));
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  SpectralDecomposition flipped = s.spec;
  Rng rng(31);
  for (int i = 1; i <= K; ++i)
    if (rng.uniform() < 0.5) flipped.eigenvectors.col(i) *= -1.0;

  const auto a = energies_of(s.spec);
  const auto b = energies_of(flipped);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
}

TEST_CASE("blocked kernel matches the serial reference") {
  const Setup s = prepare(fused_spheres(6), MetricMode::equi_affine, 6);
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    SignSignature sig;
    for (int i = 0; i < 5; ++i) sig.signs.push_back(rng.uniform() < 0.5 ? 1 : -1);
    const double fast = signature_energy(s.spec, sig, s.areas);
    const double slow = ref::signature_energy(s.spec, sig, s.areas);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
  }
}

TEST_CASE("degenerate spectra produce a warning") {
  SpectralDecomposition spec;
  spec.vertex_count = 5;
  spec.eigenvalues = Eigen::VectorXd(5);
  spec.eigenvalues << 0.0, 1.0, 1.0 + 1e-9, 2.0, 3.0;
  spec.eigenvectors = Eigen::MatrixXd::Identity(5, 5);
  spec.multiplet = {0, 1, 1, 0, 0};
  const Eigen::VectorXd areas = Eigen::VectorXd::Constant(5, 0.2);

  const SymmetryResult result = detect_symmetries(spec, 3, 1, areas);
  CHECK(result.degenerate_warning);
  CHECK(result.used_indices == std::vector<int>{1, 2, 3});

  const SymmetryResult dropped = detect_symmetries(spec, 3, 1, areas, true);
  CHECK(dropped.used_indices == std::vector<int>{3});
  CHECK_FALSE(dropped.candidates.empty());
}

TEST_CASE("validation") {
  const Setup s = prepare(bumped_blob(3, 4, 1.0), MetricMode::equi_affine, 4);
  SignSignature too_long;
  too_long.signs.assign(10, 1);
  CHECK_THROWS_AS(signature_energy(s.spec, too_long, s.areas), InvalidArgumentError);
  CHECK_THROWS_AS(detect_symmetries(s.spec, 0, 1, s.areas), InvalidArgumentError);
}
