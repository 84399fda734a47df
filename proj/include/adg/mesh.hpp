#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "adg/errors.hpp"

namespace adg {

// Undirected edge with its incident faces; face1 == -1 on the boundary.
struct EdgeRecord {
  int v0 = -1;  // v0 < v1
  int v1 = -1;
  int face0 = -1;
  int face1 = -1;

  int face_count() const { return face1 >= 0 ? 2 : 1; }
};

// Immutable indexed triangle mesh. Construction validates index ranges,
// face non-degeneracy, edge manifoldness and orientation consistency,
// and builds edge/face adjacency. Safe to share across threads.
class TriangleMesh {
public:
  static TriangleMesh build(std::vector<Eigen::Vector3d> vertices,
                            std::vector<std::array<int, 3>> faces);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::vector<Eigen::Vector3d>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }

  const Eigen::Vector3d& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const std::array<int, 3>& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }

  // Neighbor faces across local edges 0:(v0,v1), 1:(v1,v2), 2:(v2,v0);
  // -1 marks an absent (boundary) slot.
  const std::array<int, 3>& face_one_ring(int f) const {
    return face_neighbors_[static_cast<std::size_t>(f)];
  }

  // Sorted vertex ids adjacent to v.
  const std::vector<int>& vertex_neighbors(int v) const {
    return vertex_neighbors_[static_cast<std::size_t>(v)];
  }

  double face_area(int f) const;
  double total_area() const;
  double mean_edge_length() const;

  // Hops in the vertex adjacency graph, capped at max_hops (returns
  // max_hops + 1 when farther apart).
  int graph_distance(int from, int to, int max_hops) const;

private:
  TriangleMesh() = default;

  std::vector<Eigen::Vector3d> vertices_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::array<int, 3>> face_neighbors_;
  std::vector<std::vector<int>> vertex_neighbors_;
};

}  // namespace adg
