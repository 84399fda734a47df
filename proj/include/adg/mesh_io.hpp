#pragma once

#include <string>
#include <vector>

#include "adg/mesh.hpp"

namespace adg {

enum class MeshFormat { off, obj };

// ASCII OFF or Wavefront OBJ; format picked from the file extension.
TriangleMesh load_mesh(const std::string& path);
TriangleMesh load_mesh(const std::string& path, MeshFormat format);

void save_off(const TriangleMesh& mesh, const std::string& path);

// ASCII PLY with per-vertex RGB from a blue -> red linear colormap over
// [min(field), max(field)]; constant fields map to (128, 128, 128).
void export_scalar_ply(const TriangleMesh& mesh, const std::vector<double>& field,
                       const std::string& path);

}  // namespace adg
