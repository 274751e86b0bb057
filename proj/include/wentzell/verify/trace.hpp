#pragma once

#include <cstdint>

#include "wentzell/core/random.hpp"
#include "wentzell/fem/norms.hpp"
#include "wentzell/sparse/lu.hpp"
#include "wentzell/verify/report.hpp"

namespace wentzell {

struct TraceConstantEstimate {
  double c1 = 0.0;
  double s = 2.0;
  Vector maximizer;
  double best_random = 0.0;  // best ratio among the random trial vectors
  Report report;
};

namespace detail {

/// Gradient of N(u) = ||u_Gamma||_s^s for real nodal u.
inline Vector trace_power_gradient(const OperatorBundle& b, std::span<const cplx> u, double s) {
  const auto& mesh = *b.mesh;
  Vector g(u.size(), 0.0);
  for (std::size_t e = 0; e < mesh.boundary_edges().size(); ++e) {
    const auto& edge = mesh.boundary_edges()[e];
    const double len = mesh.boundary_edge_length(e);
    for (const auto& [t, w] : kEdgeRule4) {
      const double val = ((1.0 - t) * u[edge.a] + t * u[edge.b]).real();
      const double d = s * std::pow(std::abs(val), s - 2.0) * val * w * len;
      g[edge.a] += d * (1.0 - t);
      g[edge.b] += d * t;
    }
  }
  return g;
}

}  // namespace detail

/// Estimates c1 in ||u_Gamma||_{L^s(Gamma)} <= c1 ||u||_{H^1(Omega)} as the
/// best ratio over random vectors, followed by an ascent u <- H^{-1} grad N(u)
/// with H the H^1 Gram matrix. The ascent never decreases the ratio; for s = 2
/// it is the power iteration for the pencil (B, K + M).
inline TraceConstantEstimate trace_constant_estimate(const OperatorBundle& b, double s, std::size_t n_random = 500,
                                                     std::size_t n_ascent = 50, std::uint64_t seed = 1) {
  if (!(s >= 2.0)) throw InvalidArgument("trace_constant_estimate: s must be >= 2");
  TraceConstantEstimate est;
  est.s = s;
  auto ratio = [&](std::span<const cplx> u) {
    const double h = h1_norm(b, u);
    return h > 0.0 ? trace_ls_norm(b, u, s) / h : 0.0;
  };
  Rng rng(seed);
  Vector best = ones(b.n_total());
  double best_ratio = ratio(best);
  for (std::size_t k = 0; k < n_random; ++k) {
    Vector u = random_real_vector(rng, b.n_total());
    const double r = ratio(u);
    est.best_random = std::max(est.best_random, r);
    if (r > best_ratio) {
      best_ratio = r;
      best = std::move(u);
    }
  }
  const CsrMatrix h1 = b.h1_gram();
  const auto lu = lu_factor(h1);
  Vector u = best;
  for (std::size_t it = 0; it < n_ascent; ++it) {
    u = lu.solve(detail::trace_power_gradient(b, u, s));
    const double n = h1_norm(b, u);
    if (!(n > 0.0)) break;
    u = scaled(1.0 / n, u);
    const double r = ratio(u);
    if (r > best_ratio) {
      best_ratio = r;
      best = u;
    }
  }
  est.c1 = best_ratio;
  est.maximizer = std::move(best);
  est.report = Report("trace-constant");
  est.report.context(b, seed).set("s", s).set("c1", est.c1).set("best_random", est.best_random);
  est.report.set("random_samples", n_random).set("ascent_iterations", n_ascent);
  return est;
}

}  // namespace wentzell
