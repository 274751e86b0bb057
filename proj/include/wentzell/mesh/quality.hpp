#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wentzell/mesh/tri_mesh.hpp"

namespace wentzell {

struct MeshQualityReport {
  double max_angle = 0.0;  // radians
  bool is_nonobtuse = true;
  double h_max = 0.0;
  double h_min = 0.0;
};

inline constexpr double kNonobtuseSlack = 1e-12;

inline MeshQualityReport quality_report(const TriMesh& mesh) {
  MeshQualityReport r;
  r.h_min = std::numeric_limits<double>::infinity();
  const auto& v = mesh.vertices();
  for (const auto& tri : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const Point& p = v[tri[k]];
      const Point& a = v[tri[(k + 1) % 3]];
      const Point& b = v[tri[(k + 2) % 3]];
      const double ux = a.x - p.x, uy = a.y - p.y;
      const double wx = b.x - p.x, wy = b.y - p.y;
      const double lu = std::hypot(ux, uy), lw = std::hypot(wx, wy);
      const double c = std::clamp((ux * wx + uy * wy) / (lu * lw), -1.0, 1.0);
      r.max_angle = std::max(r.max_angle, std::acos(c));
      r.h_max = std::max(r.h_max, lu);
      r.h_min = std::min(r.h_min, lu);
    }
  }
  r.is_nonobtuse = r.max_angle <= std::numbers::pi / 2 + kNonobtuseSlack;
  return r;
}

}  // namespace wentzell
