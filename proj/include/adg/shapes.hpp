#pragma once

#include <cstdint>
#include <vector>

#include "adg/mesh.hpp"

namespace adg {

// Synthetic test shapes shared by the test suites, the benchmark and the
// bundled retrieval corpus.

TriangleMesh tetrahedron();
TriangleMesh icosahedron();

// Class-I geodesic sphere: every icosahedron face split into
// frequency^2 triangles, vertices projected to the sphere.
// 10 * frequency^2 + 2 vertices.
TriangleMesh icosphere(int frequency, double radius = 1.0);

// Open rectangular grid in the z = 0 plane, two triangles per cell.
TriangleMesh flat_grid(int nx, int ny, double spacing = 1.0);

// Strictly convex random blob: sphere with a few smooth low-order radial
// bumps. Keep amplitude small (<= ~0.08) to preserve convexity.
TriangleMesh bumped_blob(std::uint64_t seed, int frequency, double radius,
                         double amplitude = 0.06, int bump_count = 6);

// Two fused spheres (dumbbell) whose only intrinsic symmetry is the
// z -> -z mirror; an azimuthal perturbation removes the rotational
// symmetry of the profile. Vertex positions come in exact mirror pairs.
TriangleMesh fused_spheres(int frequency, double radius = 1.0);

// Ground-truth mirror pairing of a z-mirror-symmetric mesh: result[v] is
// the vertex nearest to (x, y, -z), required to lie within tol.
std::vector<int> mirror_vertex_map(const TriangleMesh& mesh, double tol);

// Ambient bend about the x-axis, rotation angle proportional to z.
// Near-isometric for small angles.
TriangleMesh bend(const TriangleMesh& mesh, double angle);

// 1-to-4 midpoint subdivision; the surface is unchanged.
TriangleMesh subdivide_midpoint(const TriangleMesh& mesh);

}  // namespace adg
