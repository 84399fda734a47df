#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "adg/mesh.hpp"

namespace adg {

struct AffineTransform {
  Eigen::Matrix3d A = Eigen::Matrix3d::Identity();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();

  bool invertible() const { return std::abs(A.determinant()) > 1e-12; }
  bool equi_affine() const { return std::abs(A.determinant() - 1.0) <= 1e-12; }
  AffineTransform inverse() const;
};

// x -> A x + b on every vertex; connectivity unchanged.
TriangleMesh apply_affine(const TriangleMesh& mesh, const AffineTransform& T);

// Deterministic volume-preserving transform: det A = 1, cond(A) <=
// max_condition, no reflection. Built from a seeded random matrix by
// clamping the log-singular-value spread and renormalizing the product
// of singular values to 1.
AffineTransform random_equi_affine(std::uint64_t seed, double max_condition);

}  // namespace adg
