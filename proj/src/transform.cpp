#include "adg/transform.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "adg/rng.hpp"

namespace adg {

AffineTransform AffineTransform::inverse() const {
  if (!invertible()) throw SingularTransformError("transform matrix is singular");
  AffineTransform inv;
  inv.A = A.inverse();
  inv.b = -inv.A * b;
  return inv;
}

TriangleMesh apply_affine(const TriangleMesh& mesh, const AffineTransform& T) {
  if (!T.invertible()) throw SingularTransformError("transform matrix is singular");
  std::vector<Eigen::Vector3d> vertices;
  vertices.reserve(mesh.vertices().size());
  for (const Eigen::Vector3d& x : mesh.vertices()) vertices.push_back(T.A * x + T.b);
  return TriangleMesh::build(std::move(vertices), mesh.faces());
}

AffineTransform random_equi_affine(std::uint64_t seed, double max_condition) {
  if (max_condition < 1.0)
    throw InvalidArgumentError("max_condition must be >= 1");

  Rng rng(seed);
  Eigen::Matrix3d M;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) M(r, c) = rng.normal();

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d U = svd.matrixU();
  Eigen::Matrix3d V = svd.matrixV();
  // Exclude reflections: make both factors rotations.
  if (U.determinant() < 0.0) U.col(2) *= -1.0;
  if (V.determinant() < 0.0) V.col(2) *= -1.0;

  Eigen::Vector3d logs = svd.singularValues().array().log();
  logs.array() -= logs.mean();  // product of singular values = 1
  const double spread = logs.maxCoeff() - logs.minCoeff();
  const double budget = std::log(max_condition);
  if (spread > budget && spread > 0.0) logs *= (budget / spread) * (1.0 - 1e-12);

  Eigen::Vector3d s = logs.array().exp();
  AffineTransform T;
  T.A = U * s.asDiagonal() * V.transpose();
  T.b = Eigen::Vector3d::Zero();
  return T;
}

}  // namespace adg
