#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "adg/mesh.hpp"

namespace adg {

enum class MetricMode { euclidean, equi_affine };

const char* to_string(MetricMode mode);
MetricMode metric_mode_from_string(const std::string& name);

// Planar layout of a face and the apexes of its edge neighbors.
// Slots 0..2 hold the central triangle, slot 3+e the apex across local
// edge e when has_apex[e] is set.
struct UnfoldedPatch {
  std::array<Eigen::Vector2d, 6> uv;
  std::array<Eigen::Vector3d, 6> position;
  std::array<bool, 3> has_apex{false, false, false};

  int point_count() const {
    return 3 + static_cast<int>(has_apex[0]) + static_cast<int>(has_apex[1]) +
           static_cast<int>(has_apex[2]);
  }
};

// Lays the central triangle out isometrically (vertex 0 at the origin,
// edge 0->1 along +u1, apex at positive u2) and rotates each neighbor
// rigidly about the shared edge into the same plane, on the far side.
UnfoldedPatch unfold_patch(const TriangleMesh& mesh, int face);

struct PlanarAffineMap {
  Eigen::Matrix2d linear = Eigen::Matrix2d::Identity();
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();

  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const { return linear * p + offset; }
};

// Affine map taking the central triangle to the unit simplex
// (0,0), (1,0), (0,1); the patch is returned with the map applied to
// every point (central vertices exactly on the simplex).
struct CanonizedPatch {
  UnfoldedPatch points;
  PlanarAffineMap map;
};
CanonizedPatch canonize(const UnfoldedPatch& patch);

// x(u) = c0 + c1 u1 + c2 u2 + c3 u1^2 + c4 u1 u2 + c5 u2^2.
struct QuadraticPatch {
  std::array<Eigen::Vector3d, 6> c;

  Eigen::Vector3d evaluate(const Eigen::Vector2d& u) const;
  Eigen::Vector3d du1(const Eigen::Vector2d& u) const;
  Eigen::Vector3d du2(const Eigen::Vector2d& u) const;
  Eigen::Vector3d d11() const { return 2.0 * c[3]; }
  Eigen::Vector3d d12() const { return c[4]; }
  Eigen::Vector3d d22() const { return 2.0 * c[5]; }
};

struct QuadraticFit {
  QuadraticPatch patch;
  bool least_squares = false;  // regularized fallback path taken
  double residual = 0.0;       // max pointwise fit residual
};

// Exact 6x6 interpolation when six points are present and the system's
// condition number is <= 1e10; otherwise Tikhonov-regularized least
// squares penalizing the quadratic coefficients (weight 1e-8 relative
// to the largest singular value).
QuadraticFit fit_quadratic(std::span<const Eigen::Vector2d> uv,
                           std::span<const Eigen::Vector3d> xyz);
QuadraticFit fit_quadratic(const CanonizedPatch& patch);

// Pre-metric at the simplex barycenter (1/3, 1/3):
// gtilde_ij = det(x_1, x_2, x_ij), ghat = gtilde |det gtilde|^{-1/4}.
struct PreMetric {
  Eigen::Matrix2d gtilde = Eigen::Matrix2d::Zero();
  double det_gtilde = 0.0;
  bool degenerate = true;  // |det gtilde| < eps_det (flat or parabolic)
  Eigen::Matrix2d ghat = Eigen::Matrix2d::Zero();
};
PreMetric pre_metric(const QuadraticPatch& patch, double eps_det);

// ghat = U diag(gamma) U^T  ->  U diag(max(|gamma|, eps_min)) U^T with
// eps_min = 1e-6 * reference_scale. Always SPD; identity on SPD inputs
// whose eigenvalues already clear the floor.
Eigen::Matrix2d correct_metric(const Eigen::Matrix2d& ghat, double reference_scale);

struct FaceMetricDiagnostics {
  double gamma1 = 0.0;  // pre-metric eigenvalues, gamma1 <= gamma2
  double gamma2 = 0.0;
  Eigen::Matrix2d gtilde = Eigen::Matrix2d::Zero();
  double det_gtilde = 0.0;
  bool fallback = false;        // degenerate pre-metric, Euclidean form used
  bool least_squares = false;   // quadratic fit took the regularized path
};

struct MetricField {
  MetricMode mode = MetricMode::euclidean;
  std::vector<Eigen::Matrix2d> G;                        // per face, SPD
  std::vector<std::array<Eigen::Vector2d, 3>> unfolded;  // planar layout of each face
  std::vector<FaceMetricDiagnostics> diag;
  double reference_scale = 0.0;
  double eps_det = 0.0;

  int face_count() const { return static_cast<int>(G.size()); }
  int fallback_count() const;
  double metric_area() const;  // sum over faces of sqrt(det G) / 2
};

MetricField compute_metric_field(const TriangleMesh& mesh, MetricMode mode, int threads = 0);

namespace ref {
// Serial reference; must agree bit-for-bit with the parallel kernel.
MetricField compute_metric_field(const TriangleMesh& mesh, MetricMode mode);
}  // namespace ref

// Per-face debug records {face, gtilde, G, fallback, det} as JSON.
void dump_metric_debug_json(const MetricField& field, const std::string& path);

}  // namespace adg
