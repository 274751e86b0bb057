#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "wentzell/core/stepping.hpp"
#include "wentzell/errors.hpp"
#include "wentzell/mesh/tri_mesh.hpp"

namespace wentzell {

namespace detail {

inline std::ofstream open_output(const std::string& path, bool binary = false) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw InvalidArgument("cannot open '" + path + "' for writing");
  return os;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Node-value snapshot: node, x, y, re, im.
inline void write_snapshot_csv(std::ostream& os, const TriMesh& mesh, std::span<const cplx> u,
                               const std::string& header = {}) {
  require_same_size(u.size(), mesh.num_vertices(), "write_snapshot_csv");
  os << header << "node,x,y,re,im\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto& p = mesh.vertices()[i];
    os << i << ',' << detail::fmt(p.x) << ',' << detail::fmt(p.y) << ',' << detail::fmt(u[i].real()) << ','
       << detail::fmt(u[i].imag()) << '\n';
  }
}

inline void write_snapshot_csv(const std::string& path, const TriMesh& mesh, std::span<const cplx> u,
                               const std::string& header = {}) {
  auto os = detail::open_output(path);
  write_snapshot_csv(os, mesh, u, header);
}

/// Reads a snapshot written by `write_snapshot_csv`; `#` lines are skipped.
inline Vector read_snapshot_csv(std::istream& is, std::size_t n_nodes) {
  Vector u(n_nodes, 0.0);
  std::vector<bool> seen(n_nodes, false);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("node,", 0) != 0) throw ParseError(lineno, "expected header 'node,x,y,re,im'");
      header = true;
      continue;
    }
    std::array<double, 5> f{};
    std::size_t pos = 0;
    for (int k = 0; k < 5; ++k) {
      const auto end = k < 4 ? line.find(',', pos) : line.size();
      if (end == std::string::npos) throw ParseError(lineno, "expected 5 columns");
      const std::string tok = line.substr(pos, end - pos);
      char* stop = nullptr;
      f[k] = std::strtod(tok.c_str(), &stop);
      if (tok.empty() || *stop != '\0') throw ParseError(lineno, "invalid number '" + tok + "'");
      pos = end + 1;
    }
    const auto node = static_cast<std::size_t>(f[0]);
    if (f[0] < 0 || node >= n_nodes || static_cast<double>(node) != f[0])
      throw ParseError(lineno, "node index out of range");
    u[node] = cplx(f[3], f[4]);
    seen[node] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw ParseError(lineno, "snapshot does not cover every node");
  return u;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const std::string& header = {}) {
  os << header;
  if (tr.aborted) os << "# aborted: " << tr.abort_reason << '\n';
  os << "t,mass_re,mass_im,sup_norm,h1_norm,energy_re,energy_im\n";
  for (const auto& o : tr.observations) {
    os << detail::fmt(o.t) << ',' << detail::fmt(o.mass.real()) << ',' << detail::fmt(o.mass.imag()) << ','
       << detail::fmt(o.sup_norm) << ',' << detail::fmt(o.h1_norm) << ',' << detail::fmt(o.energy.real()) << ','
       << detail::fmt(o.energy.imag()) << '\n';
  }
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& tr, const std::string& header = {}) {
  auto os = detail::open_output(path);
  write_trajectory_csv(os, tr, header);
}

/// Color ramp for heatmaps: level 0..255, piecewise linear through
/// 0 (0,0,4), 64 (87,16,110), 128 (188,55,84), 192 (249,142,9), 255 (252,255,164).
inline std::array<std::uint8_t, 3> heat_color(int level) {
  static constexpr std::array<std::pair<int, std::array<int, 3>>, 5> knots{{
      {0, {0, 0, 4}}, {64, {87, 16, 110}}, {128, {188, 55, 84}}, {192, {249, 142, 9}}, {255, {252, 255, 164}}}};
  level = std::clamp(level, 0, 255);
  std::size_t k = 0;
  while (k + 2 < knots.size() && level > knots[k + 1].first) ++k;
  const auto& [l0, c0] = knots[k];
  const auto& [l1, c1] = knots[k + 1];
  const double t = static_cast<double>(level - l0) / (l1 - l0);
  std::array<std::uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) out[c] = static_cast<std::uint8_t>(std::lround(c0[c] + t * (c1[c] - c0[c])));
  return out;
}

/// Rasterizes |u| of a P1 field onto a size x size image covering the mesh
/// bounding box (uniform scale, y up). Magnitudes map linearly from [0, max |u|]
/// to the 256 ramp levels; pixels outside the mesh are white.
inline std::vector<std::uint8_t> rasterize(const TriMesh& mesh, std::span<const cplx> u, int size = 512) {
  require_same_size(u.size(), mesh.num_vertices(), "rasterize");
  const auto& v = mesh.vertices();
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& p : v) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  const double extent = std::max(x1 - x0, y1 - y0);
  const double px = extent / size;
  const double umax = norm_inf(u);
  std::vector<std::uint8_t> img(static_cast<std::size_t>(size) * size * 3, 255);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Point a = v[tri[0]], b = v[tri[1]], c = v[tri[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const int i0 = std::max(0, static_cast<int>(std::floor((std::min({a.x, b.x, c.x}) - x0) / px)));
    const int i1 = std::min(size - 1, static_cast<int>(std::ceil((std::max({a.x, b.x, c.x}) - x0) / px)));
    const int j0 = std::max(0, static_cast<int>(std::floor((std::min({a.y, b.y, c.y}) - y0) / px)));
    const int j1 = std::min(size - 1, static_cast<int>(std::ceil((std::max({a.y, b.y, c.y}) - y0) / px)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const double x = x0 + (i + 0.5) * px, y = y0 + (j + 0.5) * px;
        const double l1 = ((x - a.x) * (c.y - a.y) - (c.x - a.x) * (y - a.y)) / det;
        const double l2 = ((b.x - a.x) * (y - a.y) - (x - a.x) * (b.y - a.y)) / det;
        const double l0 = 1.0 - l1 - l2;
        constexpr double eps = -1e-12;
        if (l0 < eps || l1 < eps || l2 < eps) continue;
        const double mag = std::abs(l0 * u[tri[0]] + l1 * u[tri[1]] + l2 * u[tri[2]]);
        const int level = umax > 0.0 ? static_cast<int>(std::lround(255.0 * mag / umax)) : 0;
        const auto col = heat_color(level);
        const std::size_t row = static_cast<std::size_t>(size - 1 - j);
        std::copy(col.begin(), col.end(), img.begin() + static_cast<std::ptrdiff_t>((row * size + i) * 3));
      }
    }
  }
  return img;
}

/// Binary PPM (P6); `comment` lines go into the header as `# ...`.
inline void write_ppm(std::ostream& os, const std::vector<std::uint8_t>& rgb, int size,
                      const std::string& comment = {}) {
  os << "P6\n";
  std::size_t start = 0;
  while (start < comment.size()) {
    auto end = comment.find('\n', start);
    if (end == std::string::npos) end = comment.size();
    std::string l = comment.substr(start, end - start);
    if (l.rfind("# ", 0) == 0) l.erase(0, 2);
    os << "# " << l << '\n';
    start = end + 1;
  }
  os << size << ' ' << size << "\n255\n";
  os.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
}

inline void write_heatmap(const std::string& path, const TriMesh& mesh, std::span<const cplx> u,
                          const std::string& comment = {}, int size = 512) {
  auto os = detail::open_output(path, true);
  write_ppm(os, rasterize(mesh, u, size), size, comment);
}

}  // namespace wentzell
