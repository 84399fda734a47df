#include "adg/fem.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include <Eigen/Dense>

#include "adg/parallel.hpp"

namespace adg {

namespace {

const Eigen::Matrix3d& reference_mass() {
  static const Eigen::Matrix3d m = [] {
    Eigen::Matrix3d r;
    r << 1.0 / 12.0, 1.0 / 24.0, 1.0 / 24.0,
         1.0 / 24.0, 1.0 / 12.0, 1.0 / 24.0,
         1.0 / 24.0, 1.0 / 24.0, 1.0 / 12.0;
    return r;
  }();
  return m;
}

const std::array<Eigen::Vector2d, 3>& hat_gradients() {
  static const std::array<Eigen::Vector2d, 3> g = {
      Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)};
  return g;
}

}  // namespace

Eigen::VectorXd FemSystem::lumped_mass() const {
  return mass * Eigen::VectorXd::Ones(mass.cols());
}

double FemSystem::total_mass() const {
  return lumped_mass().sum();
}

ElementMatrices element_matrices(const Eigen::Matrix2d& G) {
  const double det = G.determinant();
  if (!(det > 0.0))
    throw SingularMetricError("face metric has non-positive determinant " + std::to_string(det));
  const double root = std::sqrt(det);
  const Eigen::Matrix2d Ginv = G.inverse();
  const auto& grad = hat_gradients();

  ElementMatrices out;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      out.stiffness(k, l) =
          0.5 * root * grad[static_cast<std::size_t>(k)].dot(Ginv * grad[static_cast<std::size_t>(l)]);
  out.mass = root * reference_mass();
  return out;
}

namespace {

FemSystem assemble_from_blocks(const TriangleMesh& mesh,
                               const std::vector<ElementMatrices>& blocks, MetricMode mode) {
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> ta, tb;
  ta.reserve(blocks.size() * 9);
  tb.reserve(blocks.size() * 9);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& face = mesh.face(f);
    const ElementMatrices& el = blocks[static_cast<std::size_t>(f)];
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        ta.emplace_back(face[static_cast<std::size_t>(k)], face[static_cast<std::size_t>(l)],
                        el.stiffness(k, l));
        tb.emplace_back(face[static_cast<std::size_t>(k)], face[static_cast<std::size_t>(l)],
                        el.mass(k, l));
      }
    }
  }
  FemSystem sys;
  sys.vertex_count = n;
  sys.mode = mode;
  sys.stiffness.resize(n, n);
  sys.mass.resize(n, n);
  sys.stiffness.setFromTriplets(ta.begin(), ta.end());
  sys.mass.setFromTriplets(tb.begin(), tb.end());
  sys.stiffness.makeCompressed();
  sys.mass.makeCompressed();
  return sys;
}

}  // namespace

FemSystem assemble(const TriangleMesh& mesh, const MetricField& metric, int threads) {
  if (metric.face_count() != mesh.face_count())
    throw DimensionMismatchError("metric field does not cover the mesh");
  std::vector<ElementMatrices> blocks(static_cast<std::size_t>(mesh.face_count()));
  parallel_for(
      mesh.face_count(),
      [&](std::int64_t f) {
        blocks[static_cast<std::size_t>(f)] = element_matrices(metric.G[static_cast<std::size_t>(f)]);
      },
      threads);
  return assemble_from_blocks(mesh, blocks, metric.mode);
}

namespace ref {

FemSystem assemble(const TriangleMesh& mesh, const MetricField& metric) {
  if (metric.face_count() != mesh.face_count())
    throw DimensionMismatchError("metric field does not cover the mesh");
  std::vector<ElementMatrices> blocks;
  blocks.reserve(static_cast<std::size_t>(mesh.face_count()));
  for (int f = 0; f < mesh.face_count(); ++f)
    blocks.push_back(element_matrices(metric.G[static_cast<std::size_t>(f)]));
  return assemble_from_blocks(mesh, blocks, metric.mode);
}

}  // namespace ref

void write_matrix_market(const Eigen::SparseMatrix<double>& M, const std::string& path) {
  std::string out = "%%MatrixMarket matrix coordinate real symmetric\n";
  std::vector<std::string> lines;
  long nnz = 0;
  char buf[96];
  for (int col = 0; col < M.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, col); it; ++it) {
      if (it.row() < it.col()) continue;  // lower triangle
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row()) + 1,
                    static_cast<long>(it.col()) + 1, it.value());
      lines.emplace_back(buf);
      ++nnz;
    }
  }
  std::snprintf(buf, sizeof(buf), "%ld %ld %ld\n", static_cast<long>(M.rows()),
                static_cast<long>(M.cols()), nnz);
  out += buf;
  for (const std::string& l : lines) out += l;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << out;
}

}  // namespace adg
