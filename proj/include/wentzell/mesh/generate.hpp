#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "wentzell/mesh/tri_mesh.hpp"

namespace wentzell {

namespace detail {

inline double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double l2 = dx * dx + dy * dy;
  double t = l2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

/// Splits cell (i, j) of a structured grid into two right triangles. The
/// diagonal alternates with the parity of i + j.
inline void split_cell(std::vector<Triangle>& tris, std::size_t v00, std::size_t v10, std::size_t v01,
                       std::size_t v11, std::size_t i, std::size_t j) {
  if ((i + j) % 2 == 0) {
    tris.push_back({v00, v10, v11});
    tris.push_back({v00, v11, v01});
  } else {
    tris.push_back({v00, v10, v01});
    tris.push_back({v10, v11, v01});
  }
}

}  // namespace detail

/// Relabels boundary edges by the side of `polygon` (closed, vertex list) they lie on.
inline TriMesh label_by_polygon(const TriMesh& mesh, const std::vector<Point>& polygon) {
  double scale = 0.0;
  for (const auto& p : polygon) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double tol = 1e-12 * std::max(scale, 1.0);
  std::vector<BoundaryEdge> edges = mesh.boundary_edges();
  for (auto& e : edges) {
    const Point& p = mesh.vertices()[e.a];
    const Point& q = mesh.vertices()[e.b];
    int label = -1;
    for (std::size_t s = 0; s < polygon.size(); ++s) {
      const Point& a = polygon[s];
      const Point& b = polygon[(s + 1) % polygon.size()];
      if (detail::segment_distance(p, a, b) <= tol && detail::segment_distance(q, a, b) <= tol) {
        label = static_cast<int>(s);
        break;
      }
    }
    if (label < 0) throw ValidationError("boundary edge does not lie on the generating polygon");
    e.label = label;
  }
  return TriMesh::build(mesh.vertices(), mesh.triangles(), edges).with_id(mesh.id());
}

/// Structured triangulation of [0, width] x [0, height] with nx x ny cells,
/// each split along one diagonal (alternating), so every triangle is right-angled.
/// Arcs: 0 bottom, 1 right, 2 top, 3 left.
inline TriMesh generate_rectangle(double width, double height, std::size_t nx, std::size_t ny) {
  if (!(width > 0.0) || !(height > 0.0)) throw InvalidArgument("generate_rectangle: nonpositive dimensions");
  if (nx < 1 || ny < 1) throw InvalidArgument("generate_rectangle: nx and ny must be at least 1");
  std::vector<Point> verts;
  verts.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i)
      verts.push_back({static_cast<double>(i) * width / static_cast<double>(nx),
                       static_cast<double>(j) * height / static_cast<double>(ny)});
  auto id = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  std::vector<Triangle> tris;
  tris.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      detail::split_cell(tris, id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1), i, j);
  char name[128];
  std::snprintf(name, sizeof name, "rectangle(%.17g,%.17g,%zu,%zu)", width, height, nx, ny);
  const TriMesh raw = TriMesh::build(std::move(verts), std::move(tris)).with_id(name);
  return label_by_polygon(raw, {{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}});
}

/// L-shaped domain [0,1]^2 minus [1/2,1] x [1/2,1] on a grid of cell size 1/(2n)
/// (3 n^2 cells). Arcs are numbered along the polygon
/// (0,0) -> (1,0) -> (1,1/2) -> (1/2,1/2) -> (1/2,1) -> (0,1).
inline TriMesh generate_lshape(std::size_t n) {
  if (n < 1) throw InvalidArgument("generate_lshape: n must be at least 1");
  const std::size_t m = 2 * n;
  auto inside_cell = [n](std::size_t i, std::size_t j) { return !(i >= n && j >= n); };
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::vector<Point> verts;
  auto vid = [&](std::size_t i, std::size_t j) {
    auto [it, inserted] = index.try_emplace({j, i}, verts.size());
    if (inserted)
      verts.push_back({static_cast<double>(i) / static_cast<double>(m),
                       static_cast<double>(j) / static_cast<double>(m)});
    return it->second;
  };
  // number vertices row by row for a deterministic layout
  for (std::size_t j = 0; j <= m; ++j)
    for (std::size_t i = 0; i <= m; ++i) {
      bool touches = false;
      for (int dj = -1; dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di) {
          const long ci = static_cast<long>(i) + di, cj = static_cast<long>(j) + dj;
          if (ci >= 0 && cj >= 0 && ci < static_cast<long>(m) && cj < static_cast<long>(m) &&
              inside_cell(static_cast<std::size_t>(ci), static_cast<std::size_t>(cj)))
            touches = true;
        }
      if (touches) vid(i, j);
    }
  std::vector<Triangle> tris;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i)
      if (inside_cell(i, j))
        detail::split_cell(tris, vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1), i, j);
  const TriMesh raw =
      TriMesh::build(std::move(verts), std::move(tris)).with_id("lshape(" + std::to_string(n) + ")");
  return label_by_polygon(raw, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.0, 1.0}});
}

/// Shoelace area of a closed polygon.
inline double polygon_area(const std::vector<Point>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

inline double polygon_perimeter(const std::vector<Point>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += std::hypot(b.x - a.x, b.y - a.y);
  }
  return s;
}

}  // namespace wentzell
