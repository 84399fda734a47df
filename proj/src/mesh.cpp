#include "adg/mesh.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include <Eigen/Geometry>

namespace adg {

namespace {

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

struct DirectedEdge {
  int lo, hi;      // undirected key, lo < hi
  int face;
  int local_edge;  // 0:(v0,v1), 1:(v1,v2), 2:(v2,v0)
  bool forward;    // true when the face traverses lo -> hi
};

}  // namespace

TriangleMesh TriangleMesh::build(std::vector<Eigen::Vector3d> vertices,
                                 std::vector<std::array<int, 3>> faces) {
  TriangleMesh mesh;
  const int nv = static_cast<int>(vertices.size());
  const int nf = static_cast<int>(faces.size());

  for (int f = 0; f < nf; ++f) {
    const auto& face = faces[static_cast<std::size_t>(f)];
    for (int k = 0; k < 3; ++k) {
      if (face[static_cast<std::size_t>(k)] < 0 || face[static_cast<std::size_t>(k)] >= nv)
        throw ParseError("face " + std::to_string(f) + " references vertex " +
                         std::to_string(face[static_cast<std::size_t>(k)]) + " out of range [0, " +
                         std::to_string(nv) + ")");
    }
    if (face[0] == face[1] || face[1] == face[2] || face[2] == face[0])
      throw DegenerateFaceError("face " + std::to_string(f) + " repeats a vertex index");
  }

  double mean_area = 0.0;
  std::vector<double> areas(static_cast<std::size_t>(nf));
  for (int f = 0; f < nf; ++f) {
    const auto& face = faces[static_cast<std::size_t>(f)];
    areas[static_cast<std::size_t>(f)] =
        triangle_area(vertices[static_cast<std::size_t>(face[0])],
                      vertices[static_cast<std::size_t>(face[1])],
                      vertices[static_cast<std::size_t>(face[2])]);
    mean_area += areas[static_cast<std::size_t>(f)];
  }
  if (nf > 0) mean_area /= nf;
  for (int f = 0; f < nf; ++f) {
    if (areas[static_cast<std::size_t>(f)] < 1e-12 * mean_area)
      throw DegenerateFaceError("face " + std::to_string(f) + " has near-zero area");
  }

  std::vector<DirectedEdge> directed;
  directed.reserve(static_cast<std::size_t>(3 * nf));
  for (int f = 0; f < nf; ++f) {
    const auto& face = faces[static_cast<std::size_t>(f)];
    for (int e = 0; e < 3; ++e) {
      const int a = face[static_cast<std::size_t>(e)];
      const int b = face[static_cast<std::size_t>((e + 1) % 3)];
      DirectedEdge de;
      de.lo = std::min(a, b);
      de.hi = std::max(a, b);
      de.face = f;
      de.local_edge = e;
      de.forward = (a == de.lo);
      directed.push_back(de);
    }
  }
  std::sort(directed.begin(), directed.end(), [](const DirectedEdge& x, const DirectedEdge& y) {
    if (x.lo != y.lo) return x.lo < y.lo;
    if (x.hi != y.hi) return x.hi < y.hi;
    return x.face < y.face;
  });

  mesh.face_neighbors_.assign(static_cast<std::size_t>(nf), {-1, -1, -1});
  std::size_t i = 0;
  while (i < directed.size()) {
    std::size_t j = i;
    while (j < directed.size() && directed[j].lo == directed[i].lo && directed[j].hi == directed[i].hi)
      ++j;
    const std::size_t count = j - i;
    if (count > 2)
      throw NonManifoldError("edge (" + std::to_string(directed[i].lo) + ", " +
                             std::to_string(directed[i].hi) + ") is shared by " +
                             std::to_string(count) + " faces");
    EdgeRecord rec;
    rec.v0 = directed[i].lo;
    rec.v1 = directed[i].hi;
    rec.face0 = directed[i].face;
    if (count == 2) {
      rec.face1 = directed[i + 1].face;
      if (directed[i].forward == directed[i + 1].forward)
        throw NonManifoldError("edge (" + std::to_string(rec.v0) + ", " + std::to_string(rec.v1) +
                               ") has inconsistent orientation in faces " +
                               std::to_string(rec.face0) + " and " + std::to_string(rec.face1));
      mesh.face_neighbors_[static_cast<std::size_t>(directed[i].face)]
                          [static_cast<std::size_t>(directed[i].local_edge)] = directed[i + 1].face;
      mesh.face_neighbors_[static_cast<std::size_t>(directed[i + 1].face)]
                          [static_cast<std::size_t>(directed[i + 1].local_edge)] = directed[i].face;
    }
    mesh.edges_.push_back(rec);
    i = j;
  }

  mesh.vertex_neighbors_.assign(static_cast<std::size_t>(nv), {});
  for (const EdgeRecord& e : mesh.edges_) {
    mesh.vertex_neighbors_[static_cast<std::size_t>(e.v0)].push_back(e.v1);
    mesh.vertex_neighbors_[static_cast<std::size_t>(e.v1)].push_back(e.v0);
  }
  for (auto& nbrs : mesh.vertex_neighbors_) std::sort(nbrs.begin(), nbrs.end());

  mesh.vertices_ = std::move(vertices);
  mesh.faces_ = std::move(faces);
  return mesh;
}

double TriangleMesh::face_area(int f) const {
  const auto& face = faces_[static_cast<std::size_t>(f)];
  return triangle_area(vertex(face[0]), vertex(face[1]), vertex(face[2]));
}

double TriangleMesh::total_area() const {
  double total = 0.0;
  for (int f = 0; f < face_count(); ++f) total += face_area(f);
  return total;
}

double TriangleMesh::mean_edge_length() const {
  if (edges_.empty()) return 0.0;
  double total = 0.0;
  for (const EdgeRecord& e : edges_) total += (vertex(e.v0) - vertex(e.v1)).norm();
  return total / static_cast<double>(edges_.size());
}

int TriangleMesh::graph_distance(int from, int to, int max_hops) const {
  if (from == to) return 0;
  std::vector<int> dist(static_cast<std::size_t>(vertex_count()), -1);
  std::deque<int> queue;
  dist[static_cast<std::size_t>(from)] = 0;
  queue.push_back(from);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<std::size_t>(v)];
    if (d >= max_hops) continue;
    for (int w : vertex_neighbors(v)) {
      if (dist[static_cast<std::size_t>(w)] >= 0) continue;
      dist[static_cast<std::size_t>(w)] = d + 1;
      if (w == to) return d + 1;
      queue.push_back(w);
    }
  }
  return max_hops + 1;
}

}  // namespace adg
