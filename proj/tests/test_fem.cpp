#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <Eigen/Dense>

#include "adg/fem.hpp"
#include "adg/rng.hpp"
#include "adg/shapes.hpp"
#include "oracles.hpp"

using namespace adg;

namespace {

Eigen::Matrix2d random_spd(Rng& rng) {
  Eigen::Matrix2d m;
  m << rng.normal(), rng.normal(), rng.normal(), rng.normal();
  return m * m.transpose() + 0.2 * Eigen::Matrix2d::Identity();
}

}  // namespace

TEST_CASE("element matrices for the identity metric") {
  const ElementMatrices el = element_matrices(Eigen::Matrix2d::Identity());
  Eigen::Matrix3d expected_stiffness;
  expected_stiffness << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  expected_stiffness *= 0.5;
  CHECK((el.stiffness - expected_stiffness).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::Matrix3d expected_mass;
  expected_mass << 1.0 / 12, 1.0 / 24, 1.0 / 24,
                   1.0 / 24, 1.0 / 12, 1.0 / 24,
                   1.0 / 24, 1.0 / 24, 1.0 / 12;
  CHECK((el.mass - expected_mass).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(el.mass.sum() == doctest::Approx(0.5).epsilon(1e-14));  // simplex area
}

TEST_CASE("element matrices match numerical quadrature") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Matrix2d G = random_spd(rng);
    const ElementMatrices el = element_matrices(G);
    const Eigen::Matrix3d qs = oracle::element_stiffness_quadrature(G);
    const Eigen::Matrix3d qm = oracle::element_mass_quadrature(G);
    CHECK((el.stiffness - qs).cwiseAbs().maxCoeff() <= 1e-12 * qs.cwiseAbs().maxCoeff());
    CHECK((el.mass - qm).cwiseAbs().maxCoeff() <= 1e-12 * qm.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("conformal scaling cancels in the stiffness and scales the mass") {
  const double c = 3.7;
  const ElementMatrices unit = element_matrices(Eigen::Matrix2d::Identity());
  const ElementMatrices scaled = element_matrices(c * Eigen::Matrix2d::Identity());
  CHECK((scaled.stiffness - unit.stiffness).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((scaled.mass - c * unit.mass).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("element matrices reject non-SPD metrics") {
  Eigen::Matrix2d bad;
  bad << 1, 2, 2, 1;  // det < 0
  CHECK_THROWS_AS(element_matrices(bad), SingularMetricError);
}

TEST_CASE("single-triangle assembly places the element blocks") {
  const TriangleMesh mesh =
      TriangleMesh::build({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
  const MetricField field = compute_metric_field(mesh, MetricMode::euclidean);
  const FemSystem sys = assemble(mesh, field);
  const ElementMatrices el = element_matrices(field.G[0]);
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      CHECK(sys.stiffness.coeff(k, l) == doctest::Approx(el.stiffness(k, l)).epsilon(1e-14));
      CHECK(sys.mass.coeff(k, l) == doctest::Approx(el.mass(k, l)).epsilon(1e-14));
    }
  }
}

TEST_CASE("mass total equals the metric surface area") {
  const TriangleMesh mesh = icosphere(8);  // subdivision-3-sized sphere
  const MetricField field = compute_metric_field(mesh, MetricMode::euclidean);
  const FemSystem sys = assemble(mesh, field);

  // Independent area summation straight from the embedding.
  double area = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) area += mesh.face_area(f);
  CHECK(sys.total_mass() == doctest::Approx(area).epsilon(1e-10));
  CHECK(sys.total_mass() == doctest::Approx(field.metric_area()).epsilon(1e-10));
  // Coarse sphere area sits just under 4 pi.
  CHECK(std::abs(sys.total_mass() - 4.0 * M_PI) / (4.0 * M_PI) < 0.02);
}

TEST_CASE("constants lie in the stiffness kernel") {
  const TriangleMesh mesh = bumped_blob(4, 8, 1.0);
  for (MetricMode mode : {MetricMode::euclidean, MetricMode::equi_affine}) {
    const FemSystem sys = assemble(mesh, compute_metric_field(mesh, mode));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.vertex_count);
    double norm_a = 0.0;
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(sys.vertex_count);
    for (int col = 0; col < sys.stiffness.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, col); it; ++it)
        row_sums(it.row()) += std::abs(it.value());
    norm_a = row_sums.maxCoeff();
    CHECK((sys.stiffness * ones).cwiseAbs().maxCoeff() < 1e-10 * norm_a);
  }
}

TEST_CASE("euclidean stiffness equals the cotangent Laplacian") {
  for (const TriangleMesh& mesh : {icosphere(6), bumped_blob(8, 6, 1.0), flat_grid(5, 4)}) {
    const FemSystem sys = assemble(mesh, compute_metric_field(mesh, MetricMode::euclidean));
    const Eigen::SparseMatrix<double> cot = oracle::cotangent_stiffness(mesh);
    const double scale = Eigen::MatrixXd(cot).cwiseAbs().maxCoeff();
    const double diff = Eigen::MatrixXd(sys.stiffness - cot).cwiseAbs().maxCoeff();
    CHECK(diff <= 1e-8 * scale);
  }
}

TEST_CASE("stiffness is positive semi-definite") {
  const TriangleMesh mesh = fused_spheres(6);
  const FemSystem sys = assemble(mesh, compute_metric_field(mesh, MetricMode::equi_affine));
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(sys.vertex_count);
    for (int i = 0; i < x.size(); ++i) x(i) = rng.normal();
    CHECK(x.dot(sys.stiffness * x) >= -1e-10 * x.squaredNorm());
  }
}

TEST_CASE("mass matrix is SPD with positive row sums") {
  const TriangleMesh mesh = bumped_blob(5, 6, 1.0);
  const FemSystem sys = assemble(mesh, compute_metric_field(mesh, MetricMode::equi_affine));
  const Eigen::VectorXd lumped = sys.lumped_mass();
  for (int i = 0; i < lumped.size(); ++i) CHECK(lumped(i) > 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(sys.mass));
  CHECK(es.eigenvalues()(0) > 0.0);
}

TEST_CASE("sparsity pattern is exactly adjacency plus diagonal") {
  const TriangleMesh mesh = icosphere(4);
  const FemSystem sys = assemble(mesh, compute_metric_field(mesh, MetricMode::euclidean));
  std::set<std::pair<int, int>> expected;
  for (int v = 0; v < mesh.vertex_count(); ++v) expected.emplace(v, v);
  for (const EdgeRecord& e : mesh.edges()) {
    expected.emplace(e.v0, e.v1);
    expected.emplace(e.v1, e.v0);
  }
  for (const auto* M : {&sys.stiffness, &sys.mass}) {
    std::set<std::pair<int, int>> stored;
    for (int col = 0; col < M->outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(*M, col); it; ++it)
        stored.emplace(static_cast<int>(it.row()), static_cast<int>(it.col()));
    CHECK(stored == expected);
  }
}

TEST_CASE("parallel assembly matches the serial reference bit-for-bit") {
  const TriangleMesh mesh = bumped_blob(6, 8, 1.0);
  const MetricField field = compute_metric_field(mesh, MetricMode::equi_affine);
  const FemSystem par = assemble(mesh, field, 0);
  const FemSystem ser = ref::assemble(mesh, field);
  CHECK(Eigen::MatrixXd(par.stiffness - ser.stiffness).cwiseAbs().maxCoeff() == 0.0);
  CHECK(Eigen::MatrixXd(par.mass - ser.mass).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix market dump is well-formed") {
  const TriangleMesh mesh = tetrahedron();
  const FemSystem sys = assemble(mesh, compute_metric_field(mesh, MetricMode::euclidean));
  const auto path = std::filesystem::temp_directory_path() / "adg_fem_A.mtx";
  write_matrix_market(sys.stiffness, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real symmetric");
  long rows, cols, nnz;
  in >> rows >> cols >> nnz;
  CHECK(rows == 4);
  CHECK(cols == 4);
  long count = 0;
  long r, c;
  double v;
  while (in >> r >> c >> v) {
    CHECK(r >= c);  // lower triangle
    ++count;
  }
  CHECK(count == nnz);
}
