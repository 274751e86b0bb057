#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "wentzell/errors.hpp"

namespace wentzell {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

using Triangle = std::array<std::size_t, 3>;

/// Boundary edge oriented with the domain on its left; `label` names the
/// polygon side (arc) it came from.
struct BoundaryEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  int label = 0;
  friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

/// Conforming planar triangulation with its boundary Gamma.
///
/// Invariants established by `build` (and therefore by every constructed mesh):
///  - every vertex is used, every triangle is counterclockwise with positive area;
///  - every edge lies in one (boundary) or two (interior) triangles, and the two
///    triangles of an interior edge traverse it in opposite directions;
///  - boundary edges chain into closed loops.
/// The mesh is immutable after construction.
class TriMesh {
 public:
  TriMesh() = default;

  /// Validates and assembles a mesh. If `boundary` is given it must list exactly
  /// the edges with a single incident triangle (either orientation accepted; they
  /// are stored with the domain on the left). Otherwise boundary edges are
  /// extracted from incidence counts with label 0, ordered by walking the loops.
  static TriMesh build(std::vector<Point> vertices, std::vector<Triangle> triangles,
                       std::optional<std::vector<BoundaryEdge>> boundary = std::nullopt) {
    TriMesh m;
    m.vertices_ = std::move(vertices);
    m.triangles_ = std::move(triangles);
    const std::size_t nv = m.vertices_.size();
    if (m.triangles_.empty()) throw ValidationError("mesh has no triangles");

    std::vector<char> used(nv, 0);
    for (std::size_t t = 0; t < m.triangles_.size(); ++t) {
      for (auto v : m.triangles_[t]) {
        if (v >= nv)
          throw ValidationError("triangle " + std::to_string(t) + " references nonexistent vertex " +
                                std::to_string(v));
        used[v] = 1;
      }
      const auto& tri = m.triangles_[t];
      if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
        throw ValidationError("triangle " + std::to_string(t) + " repeats a vertex");
      if (!(m.triangle_area(t) > 0.0))
        throw ValidationError("triangle " + std::to_string(t) +
                              " is not counterclockwise (inconsistent orientation) or degenerate");
    }
    for (std::size_t v = 0; v < nv; ++v)
      if (!used[v]) throw ValidationError("vertex " + std::to_string(v) + " is not used by any triangle");

    // undirected edge -> directed occurrences
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> edges;
    for (const auto& tri : m.triangles_)
      for (int k = 0; k < 3; ++k) {
        const std::size_t a = tri[k], b = tri[(k + 1) % 3];
        edges[{std::min(a, b), std::max(a, b)}].push_back({a, b});
      }
    m.n_edges_ = edges.size();
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> bdir;
    for (const auto& [key, occ] : edges) {
      if (occ.size() > 2)
        throw ValidationError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                              ") belongs to more than two triangles");
      if (occ.size() == 2 && occ[0].first != occ[1].second)
        throw ValidationError("inconsistent orientation across edge (" + std::to_string(key.first) + "," +
                              std::to_string(key.second) + ")");
      if (occ.size() == 1) bdir[key] = occ[0];
    }

    if (boundary) {
      if (boundary->size() != bdir.size())
        throw ValidationError("listed boundary has " + std::to_string(boundary->size()) +
                              " edges but incidence gives " + std::to_string(bdir.size()));
      std::set<std::pair<std::size_t, std::size_t>> seen;
      for (const auto& e : *boundary) {
        const auto key = std::make_pair(std::min(e.a, e.b), std::max(e.a, e.b));
        auto it = bdir.find(key);
        if (it == bdir.end())
          throw ValidationError("listed boundary edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                                ") is not a boundary edge of the triangulation");
        if (!seen.insert(key).second) throw ValidationError("boundary edge listed twice");
        m.boundary_edges_.push_back({it->second.first, it->second.second, e.label});
      }
    } else {
      m.boundary_edges_ = walk_loops(bdir);
    }
    m.finish_boundary();
    return m;
  }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const noexcept { return boundary_edges_; }
  /// Sorted indices of vertices on Gamma.
  const std::vector<std::size_t>& boundary_vertices() const noexcept { return boundary_vertices_; }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_triangles() const noexcept { return triangles_.size(); }
  std::size_t num_edges() const noexcept { return n_edges_; }
  std::size_t num_boundary_loops() const noexcept { return n_loops_; }

  double triangle_area(std::size_t t) const {
    const auto& p = vertices_[triangles_[t][0]];
    const auto& q = vertices_[triangles_[t][1]];
    const auto& r = vertices_[triangles_[t][2]];
    return 0.5 * ((q.x - p.x) * (r.y - p.y) - (r.x - p.x) * (q.y - p.y));
  }

  double area() const {
    double s = 0.0;
    for (std::size_t t = 0; t < triangles_.size(); ++t) s += triangle_area(t);
    return s;
  }

  double boundary_edge_length(std::size_t e) const {
    const auto& p = vertices_[boundary_edges_[e].a];
    const auto& q = vertices_[boundary_edges_[e].b];
    return std::hypot(q.x - p.x, q.y - p.y);
  }

  /// sigma(Gamma).
  double perimeter() const {
    double s = 0.0;
    for (std::size_t e = 0; e < boundary_edges_.size(); ++e) s += boundary_edge_length(e);
    return s;
  }

  /// Outward unit normal of boundary edge e.
  Point boundary_edge_normal(std::size_t e) const {
    const auto& p = vertices_[boundary_edges_[e].a];
    const auto& q = vertices_[boundary_edges_[e].b];
    const double l = boundary_edge_length(e);
    return {(q.y - p.y) / l, -(q.x - p.x) / l};
  }

  Point boundary_edge_midpoint(std::size_t e) const {
    const auto& p = vertices_[boundary_edges_[e].a];
    const auto& q = vertices_[boundary_edges_[e].b];
    return {0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
  }

  std::set<int> arc_labels() const {
    std::set<int> s;
    for (const auto& e : boundary_edges_) s.insert(e.label);
    return s;
  }

  /// V - E + T; equals 2 - (number of boundary loops) for a connected domain.
  long euler_characteristic() const {
    return static_cast<long>(vertices_.size()) - static_cast<long>(n_edges_) +
           static_cast<long>(triangles_.size());
  }

  /// Free-form identifier used in reports (generator call or file path).
  const std::string& id() const noexcept { return id_; }
  TriMesh with_id(std::string id) const {
    TriMesh m = *this;
    m.id_ = std::move(id);
    return m;
  }

  /// Geometric and topological equality; the id is ignored.
  friend bool operator==(const TriMesh& a, const TriMesh& b) {
    return a.vertices_ == b.vertices_ && a.triangles_ == b.triangles_ &&
           a.boundary_edges_ == b.boundary_edges_;
  }

 private:
  static std::vector<BoundaryEdge> walk_loops(
      const std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>& bdir) {
    std::multimap<std::size_t, std::size_t> out;  // tail -> head
    for (const auto& [key, d] : bdir) out.insert({d.first, d.second});
    std::vector<BoundaryEdge> result;
    std::set<std::pair<std::size_t, std::size_t>> used;
    for (const auto& [tail, head0] : out) {
      if (used.count({tail, head0})) continue;
      std::size_t a = tail, b = head0;
      while (!used.count({a, b})) {
        used.insert({a, b});
        result.push_back({a, b, 0});
        auto range = out.equal_range(b);
        std::optional<std::size_t> next;
        for (auto it = range.first; it != range.second; ++it)
          if (!used.count({b, it->second})) {
            next = it->second;
            break;
          }
        if (!next) break;
        a = b;
        b = *next;
      }
    }
    return result;
  }

  void finish_boundary() {
    std::map<std::size_t, int> indeg, outdeg;
    for (const auto& e : boundary_edges_) {
      ++outdeg[e.a];
      ++indeg[e.b];
    }
    for (const auto& [v, d] : outdeg)
      if (indeg[v] != d)
        throw ValidationError("boundary is not a union of closed loops at vertex " + std::to_string(v));
    for (const auto& [v, d] : indeg)
      if (outdeg[v] != d)
        throw ValidationError("boundary is not a union of closed loops at vertex " + std::to_string(v));

    boundary_vertices_.clear();
    for (const auto& [v, d] : outdeg) boundary_vertices_.push_back(v);

    // count loops by following successor edges
    std::multimap<std::size_t, std::size_t> out;
    for (std::size_t e = 0; e < boundary_edges_.size(); ++e) out.insert({boundary_edges_[e].a, e});
    std::vector<char> done(boundary_edges_.size(), 0);
    n_loops_ = 0;
    for (std::size_t e0 = 0; e0 < boundary_edges_.size(); ++e0) {
      if (done[e0]) continue;
      ++n_loops_;
      std::size_t e = e0;
      while (!done[e]) {
        done[e] = 1;
        auto range = out.equal_range(boundary_edges_[e].b);
        bool moved = false;
        for (auto it = range.first; it != range.second; ++it)
          if (!done[it->second]) {
            e = it->second;
            moved = true;
            break;
          }
        if (!moved) break;
      }
    }
  }

  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<std::size_t> boundary_vertices_;
  std::size_t n_edges_ = 0;
  std::size_t n_loops_ = 0;
  std::string id_;
};

}  // namespace wentzell
