#include "adg/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <nlohmann/json.hpp>

#include "adg/parallel.hpp"

namespace adg {

const char* to_string(MetricMode mode) {
  return mode == MetricMode::euclidean ? "euclidean" : "equi-affine";
}

MetricMode metric_mode_from_string(const std::string& name) {
  if (name == "euclidean") return MetricMode::euclidean;
  if (name == "equi-affine" || name == "equi_affine") return MetricMode::equi_affine;
  throw InvalidArgumentError("unknown metric mode \"" + name + "\"");
}

UnfoldedPatch unfold_patch(const TriangleMesh& mesh, int face) {
  const auto& f = mesh.face(face);
  const Eigen::Vector3d p0 = mesh.vertex(f[0]);
  const Eigen::Vector3d p1 = mesh.vertex(f[1]);
  const Eigen::Vector3d p2 = mesh.vertex(f[2]);

  UnfoldedPatch patch;
  patch.position[0] = p0;
  patch.position[1] = p1;
  patch.position[2] = p2;

  const double a = (p1 - p0).norm();
  const double x = (p2 - p0).dot(p1 - p0) / a;
  const double y = std::sqrt(std::max((p2 - p0).squaredNorm() - x * x, 0.0));
  patch.uv[0] = Eigen::Vector2d(0.0, 0.0);
  patch.uv[1] = Eigen::Vector2d(a, 0.0);
  patch.uv[2] = Eigen::Vector2d(x, y);

  // Local edge e runs from vertex e to vertex (e+1)%3; the remaining
  // central vertex tells which half-plane the neighbor must avoid.
  const auto& neighbors = mesh.face_one_ring(face);
  for (int e = 0; e < 3; ++e) {
    const int g = neighbors[static_cast<std::size_t>(e)];
    if (g < 0) continue;
    const int la = e;
    const int lb = (e + 1) % 3;
    const int lc = (e + 2) % 3;
    const auto& gf = mesh.face(g);
    int apex = -1;
    for (int k = 0; k < 3; ++k) {
      const int v = gf[static_cast<std::size_t>(k)];
      if (v != f[static_cast<std::size_t>(la)] && v != f[static_cast<std::size_t>(lb)]) apex = v;
    }
    const Eigen::Vector3d w = mesh.vertex(apex);
    const Eigen::Vector3d& qa = patch.position[static_cast<std::size_t>(la)];
    const Eigen::Vector3d& qb = patch.position[static_cast<std::size_t>(lb)];
    const double da = (w - qa).norm();
    const double db = (w - qb).norm();

    const Eigen::Vector2d ua = patch.uv[static_cast<std::size_t>(la)];
    const Eigen::Vector2d ub = patch.uv[static_cast<std::size_t>(lb)];
    const double len = (ub - ua).norm();
    const Eigen::Vector2d ex = (ub - ua) / len;
    const Eigen::Vector2d en(-ex.y(), ex.x());
    const double along = (da * da - db * db + len * len) / (2.0 * len);
    const double h = std::sqrt(std::max(da * da - along * along, 0.0));
    const double side = (patch.uv[static_cast<std::size_t>(lc)] - ua).dot(en) >= 0.0 ? 1.0 : -1.0;
    patch.uv[static_cast<std::size_t>(3 + e)] = ua + along * ex - side * h * en;
    patch.position[static_cast<std::size_t>(3 + e)] = w;
    patch.has_apex[static_cast<std::size_t>(e)] = true;
  }
  return patch;
}

CanonizedPatch canonize(const UnfoldedPatch& patch) {
  Eigen::Matrix2d basis;
  basis.col(0) = patch.uv[1] - patch.uv[0];
  basis.col(1) = patch.uv[2] - patch.uv[0];
  const double det = basis.determinant();
  const double scale = basis.col(0).norm() * basis.col(1).norm();
  if (std::abs(det) <= 1e-14 * std::max(scale, 1e-300))
    throw DegenerateTriangleError("central triangle is degenerate in the plane");

  CanonizedPatch out;
  out.map.linear = basis.inverse();
  out.map.offset = -(out.map.linear * patch.uv[0]);
  out.points = patch;
  for (int k = 0; k < 6; ++k)
    out.points.uv[static_cast<std::size_t>(k)] = out.map(patch.uv[static_cast<std::size_t>(k)]);
  // Pin the central vertices exactly.
  out.points.uv[0] = Eigen::Vector2d(0.0, 0.0);
  out.points.uv[1] = Eigen::Vector2d(1.0, 0.0);
  out.points.uv[2] = Eigen::Vector2d(0.0, 1.0);
  return out;
}

Eigen::Vector3d QuadraticPatch::evaluate(const Eigen::Vector2d& u) const {
  return c[0] + c[1] * u.x() + c[2] * u.y() + c[3] * (u.x() * u.x()) + c[4] * (u.x() * u.y()) +
         c[5] * (u.y() * u.y());
}

Eigen::Vector3d QuadraticPatch::du1(const Eigen::Vector2d& u) const {
  return c[1] + 2.0 * c[3] * u.x() + c[4] * u.y();
}

Eigen::Vector3d QuadraticPatch::du2(const Eigen::Vector2d& u) const {
  return c[2] + c[4] * u.x() + 2.0 * c[5] * u.y();
}

namespace {

Eigen::Matrix<double, 1, 6> vandermonde_row(const Eigen::Vector2d& u) {
  Eigen::Matrix<double, 1, 6> row;
  row << 1.0, u.x(), u.y(), u.x() * u.x(), u.x() * u.y(), u.y() * u.y();
  return row;
}

}  // namespace

QuadraticFit fit_quadratic(std::span<const Eigen::Vector2d> uv,
                           std::span<const Eigen::Vector3d> xyz) {
  const int m = static_cast<int>(uv.size());
  if (m < 3) throw InsufficientPointsError("quadratic fit needs at least 3 points, got " +
                                           std::to_string(m));
  if (xyz.size() != uv.size())
    throw DimensionMismatchError("uv/xyz point counts differ in quadratic fit");

  Eigen::MatrixXd V(m, 6);
  Eigen::MatrixXd rhs(m, 3);
  for (int i = 0; i < m; ++i) {
    V.row(i) = vandermonde_row(uv[static_cast<std::size_t>(i)]);
    rhs.row(i) = xyz[static_cast<std::size_t>(i)].transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
  const double sigma_max = svd.singularValues()(0);
  const double sigma_min = svd.singularValues()(svd.singularValues().size() - 1);

  QuadraticFit fit;
  Eigen::MatrixXd coeff;
  if (m == 6 && sigma_min > 0.0 && sigma_max / sigma_min <= 1e10) {
    coeff = Eigen::FullPivLU<Eigen::MatrixXd>(V).solve(rhs);
  } else {
    // min |V c - x|^2 + mu^2 |c_quad|^2 per channel.
    const double mu = 1e-8 * sigma_max;
    Eigen::Matrix<double, 6, 6> normal = V.transpose() * V;
    for (int q = 3; q < 6; ++q) normal(q, q) += mu * mu;
    coeff = normal.ldlt().solve(V.transpose() * rhs);
    fit.least_squares = true;
  }

  for (int q = 0; q < 6; ++q) fit.patch.c[static_cast<std::size_t>(q)] = coeff.row(q).transpose();
  for (int i = 0; i < m; ++i) {
    const double r =
        (fit.patch.evaluate(uv[static_cast<std::size_t>(i)]) - xyz[static_cast<std::size_t>(i)])
            .norm();
    fit.residual = std::max(fit.residual, r);
  }
  return fit;
}

QuadraticFit fit_quadratic(const CanonizedPatch& patch) {
  std::vector<Eigen::Vector2d> uv;
  std::vector<Eigen::Vector3d> xyz;
  uv.reserve(6);
  xyz.reserve(6);
  for (int k = 0; k < 3; ++k) {
    uv.push_back(patch.points.uv[static_cast<std::size_t>(k)]);
    xyz.push_back(patch.points.position[static_cast<std::size_t>(k)]);
  }
  for (int e = 0; e < 3; ++e) {
    if (!patch.points.has_apex[static_cast<std::size_t>(e)]) continue;
    uv.push_back(patch.points.uv[static_cast<std::size_t>(3 + e)]);
    xyz.push_back(patch.points.position[static_cast<std::size_t>(3 + e)]);
  }
  return fit_quadratic(uv, xyz);
}

namespace {

Eigen::Matrix2d barycenter_gtilde(const QuadraticPatch& patch) {
  const Eigen::Vector2d bary(1.0 / 3.0, 1.0 / 3.0);
  const Eigen::Vector3d x1 = patch.du1(bary);
  const Eigen::Vector3d x2 = patch.du2(bary);

  auto det3 = [&](const Eigen::Vector3d& xij) {
    Eigen::Matrix3d M;
    M.col(0) = x1;
    M.col(1) = x2;
    M.col(2) = xij;
    return M.determinant();
  };

  Eigen::Matrix2d gtilde;
  gtilde(0, 0) = det3(patch.d11());
  gtilde(0, 1) = gtilde(1, 0) = det3(patch.d12());
  gtilde(1, 1) = det3(patch.d22());
  return gtilde;
}

}  // namespace

PreMetric pre_metric(const QuadraticPatch& patch, double eps_det) {
  PreMetric pm;
  pm.gtilde = barycenter_gtilde(patch);
  pm.det_gtilde = pm.gtilde.determinant();
  pm.degenerate = std::abs(pm.det_gtilde) < eps_det;
  if (!pm.degenerate) pm.ghat = pm.gtilde * std::pow(std::abs(pm.det_gtilde), -0.25);
  return pm;
}

Eigen::Matrix2d correct_metric(const Eigen::Matrix2d& ghat, double reference_scale) {
  const double eps_min = 1e-6 * reference_scale;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(ghat);
  Eigen::Vector2d gamma = eig.eigenvalues();
  for (int i = 0; i < 2; ++i) gamma(i) = std::max(std::abs(gamma(i)), eps_min);
  Eigen::Matrix2d G = eig.eigenvectors() * gamma.asDiagonal() * eig.eigenvectors().transpose();
  G(0, 1) = G(1, 0) = 0.5 * (G(0, 1) + G(1, 0));
  return G;
}

int MetricField::fallback_count() const {
  int count = 0;
  for (const auto& d : diag) count += d.fallback ? 1 : 0;
  return count;
}

double MetricField::metric_area() const {
  double area = 0.0;
  for (const auto& g : G) area += 0.5 * std::sqrt(std::max(g.determinant(), 0.0));
  return area;
}

namespace {

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Gram matrix of the 3D edge vectors; this is the first fundamental
// form of the face under the canonized (unit simplex) parametrization.
Eigen::Matrix2d euclidean_form(const TriangleMesh& mesh, int face) {
  const auto& f = mesh.face(face);
  const Eigen::Vector3d e1 = mesh.vertex(f[1]) - mesh.vertex(f[0]);
  const Eigen::Vector3d e2 = mesh.vertex(f[2]) - mesh.vertex(f[0]);
  Eigen::Matrix2d g;
  g(0, 0) = e1.dot(e1);
  g(0, 1) = g(1, 0) = e1.dot(e2);
  g(1, 1) = e2.dot(e2);
  return g;
}

struct FacePass {
  Eigen::Matrix2d gtilde = Eigen::Matrix2d::Zero();
  double det_gtilde = 0.0;
  bool least_squares = false;
  std::array<Eigen::Vector2d, 3> layout;
};

FacePass equi_affine_pass(const TriangleMesh& mesh, int face) {
  FacePass out;
  const UnfoldedPatch unfolded = unfold_patch(mesh, face);
  for (int k = 0; k < 3; ++k) out.layout[static_cast<std::size_t>(k)] = unfolded.uv[static_cast<std::size_t>(k)];
  const CanonizedPatch canon = canonize(unfolded);
  const QuadraticFit fit = fit_quadratic(canon);
  out.least_squares = fit.least_squares;
  // eps_det is mesh-global and not known yet; keep the raw tensor.
  out.gtilde = barycenter_gtilde(fit.patch);
  out.det_gtilde = out.gtilde.determinant();
  return out;
}

std::array<Eigen::Vector2d, 3> isometric_layout(const TriangleMesh& mesh, int face) {
  const auto& f = mesh.face(face);
  const Eigen::Vector3d p0 = mesh.vertex(f[0]);
  const Eigen::Vector3d p1 = mesh.vertex(f[1]);
  const Eigen::Vector3d p2 = mesh.vertex(f[2]);
  const double a = (p1 - p0).norm();
  const double x = (p2 - p0).dot(p1 - p0) / a;
  const double y = std::sqrt(std::max((p2 - p0).squaredNorm() - x * x, 0.0));
  return {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(a, 0.0), Eigen::Vector2d(x, y)};
}

MetricField compute_metric_field_impl(const TriangleMesh& mesh, MetricMode mode, int threads) {
  const int nf = mesh.face_count();
  MetricField field;
  field.mode = mode;
  field.G.resize(static_cast<std::size_t>(nf));
  field.unfolded.resize(static_cast<std::size_t>(nf));
  field.diag.resize(static_cast<std::size_t>(nf));

  if (mode == MetricMode::euclidean) {
    std::vector<double> dets(static_cast<std::size_t>(nf));
    parallel_for(
        nf,
        [&](std::int64_t f) {
          const int fi = static_cast<int>(f);
          const Eigen::Matrix2d g = euclidean_form(mesh, fi);
          field.G[static_cast<std::size_t>(f)] = g;
          field.unfolded[static_cast<std::size_t>(f)] = isometric_layout(mesh, fi);
          dets[static_cast<std::size_t>(f)] = g.determinant();
        },
        threads);
    field.reference_scale = median(dets);
    parallel_for(
        nf,
        [&](std::int64_t f) {
          const Eigen::Matrix2d g = field.G[static_cast<std::size_t>(f)];
          field.G[static_cast<std::size_t>(f)] = correct_metric(g, field.reference_scale);
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(g);
          auto& d = field.diag[static_cast<std::size_t>(f)];
          d.gamma1 = eig.eigenvalues()(0);
          d.gamma2 = eig.eigenvalues()(1);
          d.det_gtilde = dets[static_cast<std::size_t>(f)];
        },
        threads);
    return field;
  }

  std::vector<FacePass> pass(static_cast<std::size_t>(nf));
  parallel_for(
      nf, [&](std::int64_t f) { pass[static_cast<std::size_t>(f)] = equi_affine_pass(mesh, static_cast<int>(f)); },
      threads);

  std::vector<double> abs_dets(static_cast<std::size_t>(nf));
  for (int f = 0; f < nf; ++f) abs_dets[static_cast<std::size_t>(f)] = std::abs(pass[static_cast<std::size_t>(f)].det_gtilde);
  const double med_det = median(abs_dets);
  field.eps_det = med_det > 0.0 ? 1e-10 * med_det : 1e-14;

  std::vector<double> scales;
  scales.reserve(static_cast<std::size_t>(nf));
  for (int f = 0; f < nf; ++f) {
    if (abs_dets[static_cast<std::size_t>(f)] >= field.eps_det)
      scales.push_back(std::sqrt(abs_dets[static_cast<std::size_t>(f)]));
  }
  if (!scales.empty()) {
    field.reference_scale = median(std::move(scales));
  } else {
    // Entirely degenerate surface (e.g. flat): take the scale from the
    // Euclidean forms that the fallback will use.
    std::vector<double> dets(static_cast<std::size_t>(nf));
    for (int f = 0; f < nf; ++f) dets[static_cast<std::size_t>(f)] = euclidean_form(mesh, f).determinant();
    field.reference_scale = median(std::move(dets));
  }

  parallel_for(
      nf,
      [&](std::int64_t f) {
        const FacePass& p = pass[static_cast<std::size_t>(f)];
        auto& d = field.diag[static_cast<std::size_t>(f)];
        d.gtilde = p.gtilde;
        d.det_gtilde = p.det_gtilde;
        d.least_squares = p.least_squares;
        field.unfolded[static_cast<std::size_t>(f)] = p.layout;
        if (std::abs(p.det_gtilde) < field.eps_det) {
          d.fallback = true;
          field.G[static_cast<std::size_t>(f)] =
              correct_metric(euclidean_form(mesh, static_cast<int>(f)), field.reference_scale);
          return;
        }
        const Eigen::Matrix2d ghat = p.gtilde * std::pow(std::abs(p.det_gtilde), -0.25);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(ghat);
        d.gamma1 = eig.eigenvalues()(0);
        d.gamma2 = eig.eigenvalues()(1);
        field.G[static_cast<std::size_t>(f)] = correct_metric(ghat, field.reference_scale);
      },
      threads);
  return field;
}

}  // namespace

MetricField compute_metric_field(const TriangleMesh& mesh, MetricMode mode, int threads) {
  return compute_metric_field_impl(mesh, mode, threads);
}

namespace ref {

MetricField compute_metric_field(const TriangleMesh& mesh, MetricMode mode) {
  return compute_metric_field_impl(mesh, mode, 1);
}

}  // namespace ref

void dump_metric_debug_json(const MetricField& field, const std::string& path) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (int f = 0; f < field.face_count(); ++f) {
    const auto& g = field.G[static_cast<std::size_t>(f)];
    const auto& d = field.diag[static_cast<std::size_t>(f)];
    nlohmann::ordered_json rec;
    rec["face"] = f;
    rec["gtilde"] = {d.gtilde(0, 0), d.gtilde(0, 1), d.gtilde(1, 1)};
    rec["G"] = {g(0, 0), g(0, 1), g(1, 1)};
    rec["fallback"] = d.fallback;
    rec["det"] = d.det_gtilde;
    records.push_back(std::move(rec));
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << records.dump(2) << "\n";
}

}  // namespace adg
