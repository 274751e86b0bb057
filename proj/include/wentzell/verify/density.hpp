#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "wentzell/core/operator.hpp"
#include "wentzell/mesh/generate.hpp"
#include "wentzell/mesh/quality.hpp"
#include "wentzell/verify/level_set.hpp"

namespace wentzell {

/// A closed-form C^2 function with its gradient and Laplacian.
struct SmoothField {
  ScalarField value;
  GradientField grad;
  ScalarField laplacian;
};

/// || h + beta u_Gamma + (Delta_h u)|_Gamma ||_{L2(Gamma)}, where Delta_h u = -G^{-1} S u
/// and h is the Green-formula flux of u. Zero for every u in the domain of the
/// discrete Wentzell operator.
inline double wentzell_domain_residual(const WentzellOperator& op, std::span<const cplx> u) {
  const auto& b = op.bundle();
  const Vector lap = scaled(-1.0, op.apply(u));
  const Vector h = discrete_normal_derivative(b, u, lap);
  const CsrMatrix bgg = b.boundary_block();
  const Vector bu = b.restrict_to_boundary(spmv(b.beta_mass, u));
  const Vector beta_u = lu_factor(bgg).solve(bu);
  Vector r(b.n_boundary());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = h[k] + beta_u[k] + lap[(*b.boundary_nodes)[k]];
  return std::sqrt(std::max(0.0, quadratic_form(bgg, r, r).real()));
}

struct DensityOptions {
  std::optional<double> lambda;  // defaults to omega0
  double r_initial = 0.25;
};

struct DensityWitness {
  ProductState u;
  double achieved_error = 0.0;   // ||u - w||_inf at the nodes
  double certified_bound = 0.0;  // t0 of u - w_G plus ||w_G - w||_inf
  double floor = 0.0;            // ||w_G - w||_inf, w_G the Robin solution with exact data
  double r = 0.0;
  std::size_t iterations = 0;
  bool reached = false;
  double domain_residual = 0.0;
  Report report;
};

namespace detail {

/// 1 on [0, 1/2], C^1 decay to 0 on [1/2, 1], 0 beyond.
inline double collar_profile(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double t = 2.0 * s - 1.0;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

struct NearestBoundary {
  double distance;
  std::size_t edge;
  Point point;
};

inline NearestBoundary nearest_boundary(const TriMesh& mesh, Point p) {
  NearestBoundary best{std::numeric_limits<double>::infinity(), 0, p};
  const auto& v = mesh.vertices();
  for (std::size_t e = 0; e < mesh.boundary_edges().size(); ++e) {
    const Point a = v[mesh.boundary_edges()[e].a], b = v[mesh.boundary_edges()[e].b];
    const double d = segment_distance(p, a, b);
    if (d < best.distance) {
      const double dx = b.x - a.x, dy = b.y - a.y;
      const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
      best = {d, e, Point{a.x + t * dx, a.y + t * dy}};
    }
  }
  return best;
}

/// Loads of the pair (Phi, Phi|_Gamma) for Phi = (1 - eta)(lambda w - Delta w) + eta g(pi x),
/// eta = collar_profile(dist / r), g = d_nu w + (lambda + beta) w. r = 0 gives the
/// exact Robin data of w.
inline Vector density_load(const OperatorBundle& b, const SmoothField& w, double lambda, double r) {
  const auto& mesh = *b.mesh;
  auto g = [&](std::size_t e, Point p) {
    const Point n = mesh.boundary_edge_normal(e);
    const auto gw = w.grad(p);
    return gw[0] * n.x + gw[1] * n.y + (lambda + b.beta[e]) * w.value(p);
  };
  const ScalarField interior = [&](Point x) -> cplx {
    const cplx f = lambda * w.value(x) - w.laplacian(x);
    if (r <= 0.0) return f;
    const auto nb = nearest_boundary(mesh, x);
    const double eta = collar_profile(nb.distance / r);
    if (eta == 0.0) return f;
    return (1.0 - eta) * f + eta * g(nb.edge, nb.point);
  };
  Vector load = interior_load_quadrature(b, interior);
  const auto& v = mesh.vertices();
  for (std::size_t e = 0; e < mesh.boundary_edges().size(); ++e) {
    const auto& edge = mesh.boundary_edges()[e];
    const double len = mesh.boundary_edge_length(e);
    for (const auto& [t, wt] : kEdgeRule4) {
      const Point p{(1.0 - t) * v[edge.a].x + t * v[edge.b].x, (1.0 - t) * v[edge.a].y + t * v[edge.b].y};
      const cplx gv = g(e, p);
      load[edge.a] += wt * len * (1.0 - t) * gv;
      load[edge.b] += wt * len * t * gv;
    }
  }
  return load;
}

}  // namespace detail

/// Builds u = R(lambda)(Phi, Phi|_Gamma) in the domain of the discrete Wentzell
/// operator approximating w, with Phi equal to lambda w - Delta w away from a
/// collar of width r and to d_nu w + (lambda + beta) w on Gamma. The collar is
/// halved until the certified sup bound on u - w drops below epsilon or r falls
/// under h_min / 8, in which case the finest result is returned with
/// `reached == false`.
inline DensityWitness density_witness(const WentzellOperator& op, const SmoothField& w, double epsilon, double p,
                                      double q, const DensityOptions& opt = {}) {
  if (!(epsilon > 0.0)) throw InvalidArgument("density_witness: epsilon must be positive");
  const auto& b = op.bundle();
  const auto e = level_set_exponents(p, q);
  const double lambda = opt.lambda.value_or(op.omega0());
  if (lambda < op.omega0()) throw InvalidArgument("density_witness: lambda below omega0");
  const LinearSolver solver(linear_combination(lambda, op.gram(), 1.0, op.form_matrix()), {}, lambda);

  const Vector wh = interpolate(*b.mesh, w.value);
  const Vector exact_load = detail::density_load(b, w, lambda, 0.0);
  const Vector wg = solver.solve(exact_load);

  DensityWitness out;
  out.floor = norm_inf(subtract(wg, wh));
  const double r_min = quality_report(*b.mesh).h_min / 8.0;
  double r = opt.r_initial;
  Vector u;
  for (;;) {
    ++out.iterations;
    const Vector load = detail::density_load(b, w, lambda, r);
    u = solver.solve(load);
    const auto cert = linfty_certify_load(b, lambda, subtract(u, wg), subtract(load, exact_load), e);
    out.r = r;
    out.achieved_error = norm_inf(subtract(u, wh));
    out.certified_bound = cert.t0 + out.floor;
    if (out.certified_bound <= epsilon) {
      out.reached = true;
      break;
    }
    if (r / 2.0 < r_min) break;
    r /= 2.0;
  }
  out.u = op.state(u);
  out.domain_residual = wentzell_domain_residual(op, u);
  out.report = Report("density-witness");
  out.report.set("mesh", b.mesh->id()).set("beta", b.beta.description());
  out.report.set("lambda", lambda).set("epsilon", epsilon).set("r", out.r).set("iterations", out.iterations);
  out.report.set("achieved_error", out.achieved_error).set("certified_bound", out.certified_bound);
  out.report.set("discretization_floor", out.floor).set("domain_residual", out.domain_residual);
  out.report.check("target_reached", out.reached);
  return out;
}

}  // namespace wentzell
