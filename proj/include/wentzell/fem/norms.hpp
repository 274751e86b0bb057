#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "wentzell/fem/assembly.hpp"

namespace wentzell {

/// 7-point degree-5 rule on the reference triangle (barycentric coordinates, weights sum to 1).
inline constexpr std::array<std::array<double, 4>, 7> kTriangleRule5{{
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {0.0597158717897698, 0.4701420641051151, 0.4701420641051151, 0.1323941527885062},
    {0.4701420641051151, 0.0597158717897698, 0.4701420641051151, 0.1323941527885062},
    {0.4701420641051151, 0.4701420641051151, 0.0597158717897698, 0.1323941527885062},
    {0.7974269853530873, 0.1012865073234563, 0.1012865073234563, 0.1259391805448271},
    {0.1012865073234563, 0.7974269853530873, 0.1012865073234563, 0.1259391805448271},
    {0.1012865073234563, 0.1012865073234563, 0.7974269853530873, 0.1259391805448271},
}};

/// 4-point Gauss-Legendre on [0, 1]: nodes and weights.
inline constexpr std::array<std::array<double, 2>, 4> kEdgeRule4{{
    {0.0694318442029737, 0.1739274225687269},
    {0.3300094782075719, 0.3260725774312731},
    {0.6699905217924281, 0.3260725774312731},
    {0.9305681557970263, 0.1739274225687269},
}};

using ScalarField = std::function<cplx(Point)>;
using GradientField = std::function<std::array<cplx, 2>(Point)>;

/// 1^T G u: the integral of u over Omega plus the integral of u_Gamma over Gamma.
inline cplx total_mass(const OperatorBundle& b, std::span<const cplx> u) {
  return dot(ones(u.size()), spmv(b.gram, u));
}

/// ||u||_H in the active Gram matrix.
inline double gram_norm(const OperatorBundle& b, std::span<const cplx> u) {
  return std::sqrt(std::max(0.0, quadratic_form(b.gram, u, u).real()));
}

inline double h1_norm(const OperatorBundle& b, std::span<const cplx> u) {
  const cplx q = quadratic_form(b.stiffness, u, u) + quadratic_form(b.mass_consistent, u, u);
  return std::sqrt(std::max(0.0, q.real()));
}

/// L^p(Omega) norm of nodal data with lumped quadrature; p = inf gives the max.
inline double lp_norm_interior(const OperatorBundle& b, std::span<const cplx> f, double p) {
  require_same_size(f.size(), b.n_total(), "lp_norm_interior");
  if (std::isinf(p)) return norm_inf(f);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += b.interior_weights[i] * std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

/// L^q(Gamma) norm of boundary-node data with lumped quadrature.
inline double lp_norm_boundary(const OperatorBundle& b, std::span<const cplx> g, double q) {
  require_same_size(g.size(), b.n_boundary(), "lp_norm_boundary");
  if (std::isinf(q)) return norm_inf(g);
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    s += b.boundary_weights[(*b.boundary_nodes)[k]] * std::pow(std::abs(g[k]), q);
  return std::pow(s, 1.0 / q);
}

/// ||u_Gamma||_{L^s(Gamma)} of a P1 function, 4-point Gauss per edge.
inline double trace_ls_norm(const OperatorBundle& b, std::span<const cplx> u, double s) {
  require_same_size(u.size(), b.n_total(), "trace_ls_norm");
  const auto& mesh = *b.mesh;
  double acc = 0.0;
  for (std::size_t e = 0; e < mesh.boundary_edges().size(); ++e) {
    const auto& edge = mesh.boundary_edges()[e];
    const double len = mesh.boundary_edge_length(e);
    for (const auto& [t, w] : kEdgeRule4)
      acc += w * len * std::pow(std::abs((1.0 - t) * u[edge.a] + t * u[edge.b]), s);
  }
  return std::pow(acc, 1.0 / s);
}

/// M f: load of interior nodal data.
inline Vector interior_load(const OperatorBundle& b, std::span<const cplx> f) {
  return spmv(b.mass(), f);
}

/// B g: load of boundary nodal data.
inline Vector boundary_load(const OperatorBundle& b, std::span<const cplx> g) {
  return spmv(b.boundary_mass(), b.extend_from_boundary(g));
}

/// Load of boundary data given separately at both endpoints of each edge, so
/// that data with jumps at corners (e.g. normal derivatives) is integrated per edge.
inline Vector boundary_load_edgewise(const OperatorBundle& b, std::span<const std::array<cplx, 2>> g) {
  const auto& mesh = *b.mesh;
  require_same_size(g.size(), mesh.boundary_edges().size(), "boundary_load_edgewise");
  Vector r(b.n_total(), 0.0);
  for (std::size_t e = 0; e < g.size(); ++e) {
    const auto& edge = mesh.boundary_edges()[e];
    const double len = mesh.boundary_edge_length(e);
    if (b.lumped()) {
      r[edge.a] += len / 2.0 * g[e][0];
      r[edge.b] += len / 2.0 * g[e][1];
    } else {
      r[edge.a] += len / 6.0 * (2.0 * g[e][0] + g[e][1]);
      r[edge.b] += len / 6.0 * (g[e][0] + 2.0 * g[e][1]);
    }
  }
  return r;
}

/// int_Omega f phi_i by the degree-5 rule on every triangle.
inline Vector interior_load_quadrature(const OperatorBundle& b, const ScalarField& f) {
  const auto& mesh = *b.mesh;
  Vector r(b.n_total(), 0.0);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const double area = mesh.triangle_area(t);
    const auto& v = mesh.vertices();
    for (const auto& q : kTriangleRule5) {
      const Point x{q[0] * v[tri[0]].x + q[1] * v[tri[1]].x + q[2] * v[tri[2]].x,
                    q[0] * v[tri[0]].y + q[1] * v[tri[1]].y + q[2] * v[tri[2]].y};
      const cplx fx = f(x);
      for (int i = 0; i < 3; ++i) r[tri[i]] += q[3] * area * fx * q[i];
    }
  }
  return r;
}

/// ||u_h - u||_{L2(Omega)} with the degree-5 rule.
inline double l2_error(const TriMesh& mesh, std::span<const cplx> uh, const ScalarField& exact) {
  double acc = 0.0;
  const auto& v = mesh.vertices();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const double area = mesh.triangle_area(t);
    for (const auto& q : kTriangleRule5) {
      const Point x{q[0] * v[tri[0]].x + q[1] * v[tri[1]].x + q[2] * v[tri[2]].x,
                    q[0] * v[tri[0]].y + q[1] * v[tri[1]].y + q[2] * v[tri[2]].y};
      const cplx val = q[0] * uh[tri[0]] + q[1] * uh[tri[1]] + q[2] * uh[tri[2]];
      acc += q[3] * area * std::norm(val - exact(x));
    }
  }
  return std::sqrt(acc);
}

/// ||grad(u_h - u)||_{L2(Omega)} with the degree-5 rule.
inline double h1_seminorm_error(const TriMesh& mesh, std::span<const cplx> uh, const GradientField& grad) {
  double acc = 0.0;
  const auto& v = mesh.vertices();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = detail::element_geometry(mesh, t);
    const auto& tri = mesh.triangles()[t];
    cplx gx = 0.0, gy = 0.0;
    for (int i = 0; i < 3; ++i) {
      gx += uh[tri[i]] * g.grad[i][0];
      gy += uh[tri[i]] * g.grad[i][1];
    }
    for (const auto& q : kTriangleRule5) {
      const Point x{q[0] * v[tri[0]].x + q[1] * v[tri[1]].x + q[2] * v[tri[2]].x,
                    q[0] * v[tri[0]].y + q[1] * v[tri[1]].y + q[2] * v[tri[2]].y};
      const auto ge = grad(x);
      acc += q[3] * g.area * (std::norm(gx - ge[0]) + std::norm(gy - ge[1]));
    }
  }
  return std::sqrt(acc);
}

inline Vector interpolate(const TriMesh& mesh, const ScalarField& f) {
  Vector r;
  r.reserve(mesh.num_vertices());
  for (const auto& p : mesh.vertices()) r.push_back(f(p));
  return r;
}

}  // namespace wentzell
