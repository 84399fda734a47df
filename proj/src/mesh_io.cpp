#include "adg/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace adg {

namespace {

std::string lower_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double& value) {
  std::size_t pos = 0;
  try {
    value = std::stod(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

bool parse_int(const std::string& tok, long& value) {
  std::size_t pos = 0;
  try {
    value = std::stol(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

// Reads the next line that carries content, skipping blanks and '#'
// comments. Returns false at end of file.
bool next_content_line(std::istream& in, std::string& line, long& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) return true;
  }
  return false;
}

TriangleMesh load_off(std::istream& in, const std::string& path) {
  std::string line;
  long line_no = 0;
  if (!next_content_line(in, line, line_no))
    throw ParseError(path + ": empty OFF file");
  if (line != "OFF")
    throw ParseError(path + ":" + std::to_string(line_no) +
                     ": expected ASCII OFF header, got \"" + line +
                     "\" (binary or non-OFF variants are not supported)");

  if (!next_content_line(in, line, line_no))
    throw ParseError(path + ": missing OFF counts line");
  const auto counts = split_ws(line);
  long nv = 0, nf = 0, ne = 0;
  if (counts.size() != 3 || !parse_int(counts[0], nv) || !parse_int(counts[1], nf) ||
      !parse_int(counts[2], ne) || nv < 0 || nf < 0)
    throw ParseError(path + ":" + std::to_string(line_no) + ": malformed OFF counts line");

  std::vector<Eigen::Vector3d> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long v = 0; v < nv; ++v) {
    if (!next_content_line(in, line, line_no))
      throw ParseError(path + ": unexpected end of file in vertex list");
    const auto toks = split_ws(line);
    double x, y, z;
    if (toks.size() != 3 || !parse_double(toks[0], x) || !parse_double(toks[1], y) ||
        !parse_double(toks[2], z))
      throw ParseError(path + ":" + std::to_string(line_no) + ": malformed vertex line");
    vertices.emplace_back(x, y, z);
  }

  std::vector<std::array<int, 3>> faces;
  faces.reserve(static_cast<std::size_t>(nf));
  for (long f = 0; f < nf; ++f) {
    if (!next_content_line(in, line, line_no))
      throw ParseError(path + ": unexpected end of file in face list");
    const auto toks = split_ws(line);
    long count = 0;
    if (toks.empty() || !parse_int(toks[0], count))
      throw ParseError(path + ":" + std::to_string(line_no) + ": malformed face line");
    if (count != 3)
      throw ParseError(path + ":" + std::to_string(line_no) + ": OFF face with " +
                       std::to_string(count) + " vertices (triangles only)");
    if (toks.size() != 4)
      throw ParseError(path + ":" + std::to_string(line_no) + ": malformed face line");
    long a, b, c;
    if (!parse_int(toks[1], a) || !parse_int(toks[2], b) || !parse_int(toks[3], c))
      throw ParseError(path + ":" + std::to_string(line_no) + ": malformed face indices");
    faces.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
  }

  return TriangleMesh::build(std::move(vertices), std::move(faces));
}

TriangleMesh load_obj(std::istream& in, const std::string& path) {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto toks = split_ws(line);
    if (toks[0] == "v") {
      double x, y, z;
      if (toks.size() != 4 || !parse_double(toks[1], x) || !parse_double(toks[2], y) ||
          !parse_double(toks[3], z))
        throw ParseError(path + ":" + std::to_string(line_no) + ": malformed \"v\" record");
      vertices.emplace_back(x, y, z);
    } else if (toks[0] == "f") {
      if (toks.size() < 4)
        throw ParseError(path + ":" + std::to_string(line_no) + ": face with fewer than 3 vertices");
      std::vector<int> poly;
      for (std::size_t t = 1; t < toks.size(); ++t) {
        // "i", "i/t", "i//n", "i/t/n": the vertex index leads.
        const std::string head = toks[t].substr(0, toks[t].find('/'));
        long idx = 0;
        if (!parse_int(head, idx) || idx < 1 || idx > static_cast<long>(vertices.size()))
          throw ParseError(path + ":" + std::to_string(line_no) + ": face index \"" + toks[t] +
                           "\" invalid (1-based indices into preceding \"v\" records)");
        poly.push_back(static_cast<int>(idx - 1));
      }
      // Fan triangulation anchored at the polygon's first vertex.
      for (std::size_t t = 1; t + 1 < poly.size(); ++t)
        faces.push_back({poly[0], poly[t], poly[t + 1]});
    }
    // Other record types (vn, vt, g, o, s, usemtl, mtllib, ...) are ignored.
  }
  return TriangleMesh::build(std::move(vertices), std::move(faces));
}

void format_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

TriangleMesh load_mesh(const std::string& path) {
  const std::string ext = lower_extension(path);
  if (ext == "off") return load_mesh(path, MeshFormat::off);
  if (ext == "obj") return load_mesh(path, MeshFormat::obj);
  throw ParseError(path + ": unsupported mesh extension \"" + ext + "\" (expected .off or .obj)");
}

TriangleMesh load_mesh(const std::string& path, MeshFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return format == MeshFormat::off ? load_off(in, path) : load_obj(in, path);
}

void save_off(const TriangleMesh& mesh, const std::string& path) {
  std::string out = "OFF\n";
  out += std::to_string(mesh.vertex_count()) + " " + std::to_string(mesh.face_count()) + " " +
         std::to_string(mesh.edge_count()) + "\n";
  for (const Eigen::Vector3d& v : mesh.vertices()) {
    format_double(out, v.x());
    out += ' ';
    format_double(out, v.y());
    out += ' ';
    format_double(out, v.z());
    out += '\n';
  }
  for (const auto& f : mesh.faces())
    out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) +
           "\n";
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << out;
  if (!os) throw IoError("failed writing " + path);
}

void export_scalar_ply(const TriangleMesh& mesh, const std::vector<double>& field,
                       const std::string& path) {
  if (static_cast<int>(field.size()) != mesh.vertex_count())
    throw DimensionMismatchError("field length " + std::to_string(field.size()) +
                                 " != vertex count " + std::to_string(mesh.vertex_count()));

  double lo = 0.0, hi = 0.0;
  if (!field.empty()) {
    lo = *std::min_element(field.begin(), field.end());
    hi = *std::max_element(field.begin(), field.end());
  }
  const bool constant = !(hi > lo);

  std::string out;
  out += "ply\nformat ascii 1.0\n";
  out += "element vertex " + std::to_string(mesh.vertex_count()) + "\n";
  out += "property double x\nproperty double y\nproperty double z\n";
  out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out += "element face " + std::to_string(mesh.face_count()) + "\n";
  out += "property list uchar int vertex_indices\nend_header\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const Eigen::Vector3d& p = mesh.vertex(v);
    format_double(out, p.x());
    out += ' ';
    format_double(out, p.y());
    out += ' ';
    format_double(out, p.z());
    int r = 128, g = 128, b = 128;
    if (!constant) {
      const double t = (field[static_cast<std::size_t>(v)] - lo) / (hi - lo);
      r = static_cast<int>(std::lround(255.0 * t));
      g = 0;
      b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    }
    out += ' ' + std::to_string(r) + ' ' + std::to_string(g) + ' ' + std::to_string(b) + '\n';
  }
  for (const auto& f : mesh.faces())
    out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) +
           "\n";

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << out;
  if (!os) throw IoError("failed writing " + path);
}

}  // namespace adg
