#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wentzell/mesh/tri_mesh.hpp"

namespace wentzell {

// Text format, one record per line:
//   wmesh 1
//   v x y          (vertex)
//   t i j k        (triangle, 0-based, counterclockwise)
//   b i j label    (optional boundary edge)
// '#' starts a comment; blank lines are ignored.

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
  return value;
}

}  // namespace detail

inline TriMesh read_mesh(std::istream& is, const std::string& id = "stream") {
  std::vector<Point> verts;
  std::vector<Triangle> tris;
  std::vector<BoundaryEdge> bnd;
  bool header = false;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "wmesh" || tok[1] != "1")
        throw ParseError(lineno, "expected header 'wmesh 1'");
      header = true;
      continue;
    }
    if (tok[0] == "v") {
      if (tok.size() != 3) throw ParseError(lineno, "vertex record needs 2 coordinates");
      verts.push_back({detail::parse_number<double>(tok[1], lineno, "coordinate"),
                       detail::parse_number<double>(tok[2], lineno, "coordinate")});
    } else if (tok[0] == "t") {
      if (tok.size() != 4) throw ParseError(lineno, "triangle record needs 3 indices");
      tris.push_back({detail::parse_number<std::size_t>(tok[1], lineno, "index"),
                      detail::parse_number<std::size_t>(tok[2], lineno, "index"),
                      detail::parse_number<std::size_t>(tok[3], lineno, "index")});
    } else if (tok[0] == "b") {
      if (tok.size() != 4) throw ParseError(lineno, "boundary record needs 2 indices and a label");
      bnd.push_back({detail::parse_number<std::size_t>(tok[1], lineno, "index"),
                     detail::parse_number<std::size_t>(tok[2], lineno, "index"),
                     detail::parse_number<int>(tok[3], lineno, "label")});
    } else {
      throw ParseError(lineno, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!header) throw ParseError(lineno + 1, "missing header 'wmesh 1'");
  std::optional<std::vector<BoundaryEdge>> listed;
  if (!bnd.empty()) listed = std::move(bnd);
  return TriMesh::build(std::move(verts), std::move(tris), std::move(listed)).with_id(id);
}

inline TriMesh read_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open mesh file '" + path + "'");
  return read_mesh(is, path);
}

/// Deterministic output: coordinates with 17 significant digits, boundary
/// edges in stored order. `comment` lines (if any) are emitted after the header.
inline void write_mesh(std::ostream& os, const TriMesh& mesh, const std::string& comment = {}) {
  os << "wmesh 1\n";
  if (!comment.empty()) {
    std::istringstream cs(comment);
    std::string l;
    while (std::getline(cs, l)) os << "# " << l << '\n';
  }
  char buf[128];
  for (const auto& p : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", p.x, p.y);
    os << buf;
  }
  for (const auto& t : mesh.triangles()) os << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : mesh.boundary_edges()) os << "b " << e.a << ' ' << e.b << ' ' << e.label << '\n';
}

inline void write_mesh(const std::string& path, const TriMesh& mesh, const std::string& comment = {}) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open '" + path + "' for writing");
  write_mesh(os, mesh, comment);
}

}  // namespace wentzell
