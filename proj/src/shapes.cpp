#include "adg/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "adg/rng.hpp"

namespace adg {

namespace {

constexpr double kGolden = 1.6180339887498948482;

const std::vector<Eigen::Vector3d>& icosahedron_vertices() {
  static const std::vector<Eigen::Vector3d> v = {
      {-1, kGolden, 0}, {1, kGolden, 0},   {-1, -kGolden, 0}, {1, -kGolden, 0},
      {0, -1, kGolden}, {0, 1, kGolden},   {0, -1, -kGolden}, {0, 1, -kGolden},
      {kGolden, 0, -1}, {kGolden, 0, 1},   {-kGolden, 0, -1}, {-kGolden, 0, 1}};
  return v;
}

const std::vector<std::array<int, 3>>& icosahedron_faces() {
  static const std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return f;
}

}  // namespace

TriangleMesh tetrahedron() {
  std::vector<Eigen::Vector3d> vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<std::array<int, 3>> faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  return TriangleMesh::build(std::move(vertices), std::move(faces));
}

TriangleMesh icosahedron() {
  return TriangleMesh::build(icosahedron_vertices(), icosahedron_faces());
}

TriangleMesh icosphere(int frequency, double radius) {
  if (frequency < 1) throw InvalidArgumentError("icosphere frequency must be >= 1");
  const int f = frequency;
  const auto& base_v = icosahedron_vertices();
  const auto& base_f = icosahedron_faces();

  std::vector<Eigen::Vector3d> vertices = base_v;

  // Edge-interior points get global ids in canonical (lo < hi) order;
  // positions are computed once from the canonical formula so shared
  // points are bit-identical across the two incident faces.
  std::map<std::pair<int, int>, int> edge_base;
  for (const auto& face : base_f) {
    for (int e = 0; e < 3; ++e) {
      const int a = face[static_cast<std::size_t>(e)];
      const int b = face[static_cast<std::size_t>((e + 1) % 3)];
      edge_base.emplace(std::pair<int, int>(std::min(a, b), std::max(a, b)), 0);
    }
  }
  {
    int next = static_cast<int>(vertices.size());
    for (auto& [key, id] : edge_base) {
      id = next;
      next += f - 1;
      for (int t = 1; t < f; ++t) {
        const Eigen::Vector3d p =
            (static_cast<double>(f - t) * base_v[static_cast<std::size_t>(key.first)] +
             static_cast<double>(t) * base_v[static_cast<std::size_t>(key.second)]) /
            static_cast<double>(f);
        vertices.push_back(p);
      }
    }
  }

  std::vector<std::array<int, 3>> faces;
  faces.reserve(static_cast<std::size_t>(base_f.size()) * static_cast<std::size_t>(f * f));

  for (const auto& face : base_f) {
    const int a = face[0], b = face[1], c = face[2];
    const Eigen::Vector3d& A = base_v[static_cast<std::size_t>(a)];
    const Eigen::Vector3d& B = base_v[static_cast<std::size_t>(b)];
    const Eigen::Vector3d& C = base_v[static_cast<std::size_t>(c)];

    auto edge_id = [&](int u, int v, int t) {
      // t steps from u toward v, 0 < t < f.
      const std::pair<int, int> key(std::min(u, v), std::max(u, v));
      const int tc = (u == key.first) ? t : f - t;
      return edge_base.at(key) + (tc - 1);
    };

    // Lattice point (i, j): ((f-i-j) A + i B + j C) / f.
    std::vector<int> grid(static_cast<std::size_t>((f + 1) * (f + 2) / 2), -1);
    auto slot = [&](int i, int j) -> int& {
      // Rows indexed by j: row j holds i = 0..f-j.
      const int row_start = j * (2 * f + 3 - j) / 2;
      return grid[static_cast<std::size_t>(row_start + i)];
    };
    for (int j = 0; j <= f; ++j) {
      for (int i = 0; i + j <= f; ++i) {
        int id;
        const int k = f - i - j;
        if (i == 0 && j == 0) id = a;
        else if (i == f) id = b;
        else if (j == f) id = c;
        else if (j == 0) id = edge_id(a, b, i);
        else if (i == 0) id = edge_id(a, c, j);
        else if (k == 0) id = edge_id(b, c, j);
        else {
          id = static_cast<int>(vertices.size());
          vertices.push_back((static_cast<double>(k) * A + static_cast<double>(i) * B +
                              static_cast<double>(j) * C) /
                             static_cast<double>(f));
        }
        slot(i, j) = id;
      }
    }

    for (int j = 0; j < f; ++j) {
      for (int i = 0; i + j < f; ++i) {
        faces.push_back({slot(i, j), slot(i + 1, j), slot(i, j + 1)});
        if (i + j < f - 1)
          faces.push_back({slot(i + 1, j), slot(i + 1, j + 1), slot(i, j + 1)});
      }
    }
  }

  for (Eigen::Vector3d& v : vertices) v *= radius / v.norm();
  return TriangleMesh::build(std::move(vertices), std::move(faces));
}

TriangleMesh flat_grid(int nx, int ny, double spacing) {
  if (nx < 1 || ny < 1) throw InvalidArgumentError("flat_grid needs nx, ny >= 1");
  std::vector<Eigen::Vector3d> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) vertices.emplace_back(i * spacing, j * spacing, 0.0);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> faces;
  faces.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriangleMesh::build(std::move(vertices), std::move(faces));
}

TriangleMesh bumped_blob(std::uint64_t seed, int frequency, double radius, double amplitude,
                         int bump_count) {
  TriangleMesh sphere = icosphere(frequency, 1.0);
  Rng rng(seed);
  std::vector<Eigen::Vector3d> dirs;
  std::vector<double> amps;
  std::vector<int> powers;
  for (int m = 0; m < bump_count; ++m) {
    Eigen::Vector3d w(rng.normal(), rng.normal(), rng.normal());
    dirs.push_back(w.normalized());
    const double a = rng.uniform(0.5 * amplitude, amplitude);
    amps.push_back(rng.uniform() < 0.5 ? -a : a);
    powers.push_back(2 + m % 2);
  }
  std::vector<Eigen::Vector3d> vertices;
  vertices.reserve(sphere.vertices().size());
  for (const Eigen::Vector3d& d : sphere.vertices()) {
    double rho = 1.0;
    for (int m = 0; m < bump_count; ++m)
      rho += amps[static_cast<std::size_t>(m)] *
             std::pow(d.dot(dirs[static_cast<std::size_t>(m)]), powers[static_cast<std::size_t>(m)]);
    vertices.push_back(radius * rho * d);
  }
  return TriangleMesh::build(std::move(vertices), sphere.faces());
}

TriangleMesh fused_spheres(int frequency, double radius) {
  TriangleMesh sphere = icosphere(frequency, 1.0);
  std::vector<Eigen::Vector3d> vertices;
  vertices.reserve(sphere.vertices().size());
  for (const Eigen::Vector3d& d : sphere.vertices()) {
    const double z2 = d.z() * d.z();
    const double theta = std::atan2(d.y(), d.x());
    // Even in z, so the z -> -z mirror is exact; the azimuthal term
    // breaks the rotational symmetry of the profile. Its amplitude must
    // be large enough that no near-rotation survives as an approximate
    // symmetry, or the recovered maps smear along the orbit.
    const double rho = 0.6 + 0.5 * z2 +
                       0.12 * (1.0 - z2) * (std::sin(3.0 * theta + 0.7) +
                                            0.6 * std::cos(5.0 * theta - 1.1));
    vertices.push_back(radius * rho * d);
  }
  return TriangleMesh::build(std::move(vertices), sphere.faces());
}

std::vector<int> mirror_vertex_map(const TriangleMesh& mesh, double tol) {
  const int n = mesh.vertex_count();
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  // Sort by x to cut the quadratic scan; positions mirror exactly in x.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return mesh.vertex(a).x() < mesh.vertex(b).x(); });
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) xs[static_cast<std::size_t>(r)] = mesh.vertex(order[static_cast<std::size_t>(r)]).x();

  for (int v = 0; v < n; ++v) {
    const Eigen::Vector3d target(mesh.vertex(v).x(), mesh.vertex(v).y(), -mesh.vertex(v).z());
    const auto lo = std::lower_bound(xs.begin(), xs.end(), target.x() - tol) - xs.begin();
    int best = -1;
    double best_d = tol;
    for (std::size_t r = static_cast<std::size_t>(lo); r < xs.size() && xs[r] <= target.x() + tol; ++r) {
      const int w = order[r];
      const double d = (mesh.vertex(w) - target).norm();
      if (d < best_d) {
        best_d = d;
        best = w;
      }
    }
    if (best < 0)
      throw InvalidArgumentError("mesh is not z-mirror symmetric at vertex " + std::to_string(v));
    map[static_cast<std::size_t>(v)] = best;
  }
  return map;
}

TriangleMesh bend(const TriangleMesh& mesh, double angle) {
  double z_scale = 0.0;
  for (const Eigen::Vector3d& v : mesh.vertices()) z_scale = std::max(z_scale, std::abs(v.z()));
  if (z_scale == 0.0) return mesh;
  std::vector<Eigen::Vector3d> vertices;
  vertices.reserve(mesh.vertices().size());
  for (const Eigen::Vector3d& v : mesh.vertices()) {
    const double phi = angle * (v.z() / z_scale);
    const double c = std::cos(phi), s = std::sin(phi);
    vertices.emplace_back(v.x(), c * v.y() - s * v.z(), s * v.y() + c * v.z());
  }
  return TriangleMesh::build(std::move(vertices), mesh.faces());
}

TriangleMesh subdivide_midpoint(const TriangleMesh& mesh) {
  std::vector<Eigen::Vector3d> vertices = mesh.vertices();
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const std::pair<int, int> key(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (mesh.vertex(key.first) + mesh.vertex(key.second)));
    midpoint.emplace(key, id);
    return id;
  };
  std::vector<std::array<int, 3>> faces;
  faces.reserve(mesh.faces().size() * 4);
  for (const auto& f : mesh.faces()) {
    const int mab = mid(f[0], f[1]);
    const int mbc = mid(f[1], f[2]);
    const int mca = mid(f[2], f[0]);
    faces.push_back({f[0], mab, mca});
    faces.push_back({mab, f[1], mbc});
    faces.push_back({mca, mbc, f[2]});
    faces.push_back({mab, mbc, mca});
  }
  return TriangleMesh::build(std::move(vertices), std::move(faces));
}

}  // namespace adg
