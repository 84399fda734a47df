#pragma once

#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "adg/mesh.hpp"
#include "adg/metric.hpp"

namespace adg {

// Generalized eigenproblem matrices A alpha = lambda B alpha for the
// piecewise-linear FEM discretization of the Laplace-Beltrami operator.
// A is symmetric positive semi-definite with constants in its kernel;
// B is the consistent (non-lumped) mass matrix, symmetric positive
// definite. Both share the vertex-adjacency-plus-diagonal sparsity
// pattern.
struct FemSystem {
  Eigen::SparseMatrix<double> stiffness;  // A
  Eigen::SparseMatrix<double> mass;       // B
  int vertex_count = 0;
  MetricMode mode = MetricMode::euclidean;

  // Row sums of B (lumped vertex areas).
  Eigen::VectorXd lumped_mass() const;
  double total_mass() const;  // sum of all B entries = metric surface area
};

struct ElementMatrices {
  Eigen::Matrix3d stiffness;
  Eigen::Matrix3d mass;
};

// Element blocks on the canonized unit simplex with constant metric G:
// hat gradients (-1,-1), (1,0), (0,1); stiffness (sqrt(det G)/2)
// grad_k^T G^{-1} grad_l; mass sqrt(det G) [[1/12,1/24,1/24],...].
ElementMatrices element_matrices(const Eigen::Matrix2d& G);

FemSystem assemble(const TriangleMesh& mesh, const MetricField& metric, int threads = 0);

namespace ref {
// Single-loop serial assembly; must agree bit-for-bit with assemble().
FemSystem assemble(const TriangleMesh& mesh, const MetricField& metric);
}  // namespace ref

// Matrix Market coordinate format, symmetric, lower triangle.
void write_matrix_market(const Eigen::SparseMatrix<double>& M, const std::string& path);

}  // namespace adg
