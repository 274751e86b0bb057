#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wentzell/errors.hpp"
#include "wentzell/mesh/tri_mesh.hpp"
#include "wentzell/sparse/vector_ops.hpp"

namespace wentzell {

/// Complex boundary coefficient beta in L^inf(Gamma), constant on each boundary edge.
class BoundaryCoefficient {
 public:
  BoundaryCoefficient() = default;

  explicit BoundaryCoefficient(std::vector<cplx> values, std::string description = "per-edge")
      : values_(std::move(values)), description_(std::move(description)) {
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw InvalidArgument("BoundaryCoefficient: non-finite entry");
  }

  static BoundaryCoefficient constant(const TriMesh& mesh, cplx value) {
    return BoundaryCoefficient(std::vector<cplx>(mesh.boundary_edges().size(), value),
                               "constant " + format(value));
  }

  /// One value per arc label; every label present on the mesh must be listed.
  static BoundaryCoefficient per_arc(const TriMesh& mesh, const std::map<int, cplx>& arcs) {
    std::vector<cplx> v;
    v.reserve(mesh.boundary_edges().size());
    for (const auto& e : mesh.boundary_edges()) {
      auto it = arcs.find(e.label);
      if (it == arcs.end())
        throw InvalidArgument("BoundaryCoefficient: no value for arc " + std::to_string(e.label));
      v.push_back(it->second);
    }
    std::string d = "per-arc";
    for (const auto& [l, z] : arcs) d += " " + std::to_string(l) + ":" + format(z);
    return BoundaryCoefficient(std::move(v), d);
  }

  /// Projects a pointwise description onto edge constants by midpoint sampling.
  static BoundaryCoefficient sampled(const TriMesh& mesh, const std::function<cplx(Point, int)>& fn,
                                     std::string description = "sampled") {
    std::vector<cplx> v;
    v.reserve(mesh.boundary_edges().size());
    for (std::size_t e = 0; e < mesh.boundary_edges().size(); ++e)
      v.push_back(fn(mesh.boundary_edge_midpoint(e), mesh.boundary_edges()[e].label));
    return BoundaryCoefficient(std::move(v), std::move(description));
  }

  const std::vector<cplx>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  cplx operator[](std::size_t e) const { return values_[e]; }
  const std::string& description() const noexcept { return description_; }

  double ess_inf_re() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : values_) m = std::min(m, v.real());
    return values_.empty() ? 0.0 : m;
  }
  double sup_abs_im() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
    return m;
  }
  double sup_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  bool is_real() const { return sup_abs_im() == 0.0; }

 private:
  static std::string format(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
  }

  std::vector<cplx> values_;
  std::string description_;
};

}  // namespace wentzell
