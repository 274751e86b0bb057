#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "wentzell/errors.hpp"

namespace wentzell {

/// Hypothesis phi(h) <= c_phi (h - k)^{-alpha} phi(k)^delta for h > k >= 0.
struct StampacchiaInput {
  double c_phi = 1.0;
  double alpha = 1.0;
  double delta = 2.0;
  double phi0 = 1.0;
};

inline void validate(const StampacchiaInput& in) {
  if (!(in.c_phi > 0.0) || !std::isfinite(in.c_phi)) throw InvalidArgument("stampacchia: c_phi must be > 0");
  if (!(in.alpha > 0.0) || !std::isfinite(in.alpha)) throw InvalidArgument("stampacchia: alpha must be > 0");
  if (!(in.delta > 1.0) || !std::isfinite(in.delta)) throw InvalidArgument("stampacchia: delta must be > 1");
  if (!(in.phi0 >= 0.0) || !std::isfinite(in.phi0)) throw InvalidArgument("stampacchia: phi0 must be >= 0");
}

/// t0 = c^{1/alpha} phi0^{(delta-1)/alpha} 2^{delta/(delta-1)}; phi vanishes beyond t0.
inline double stampacchia_threshold(const StampacchiaInput& in) {
  validate(in);
  return std::pow(in.c_phi, 1.0 / in.alpha) * std::pow(in.phi0, (in.delta - 1.0) / in.alpha) *
         std::pow(2.0, in.delta / (in.delta - 1.0));
}

struct StampacchiaLevel {
  int m = 0;
  double k = 0.0;      // (1 - 2^{-m}) t0
  double bound = 0.0;  // 2^{m alpha gamma} phi0, gamma = -1/(delta-1)
};

inline std::vector<StampacchiaLevel> stampacchia_schedule(const StampacchiaInput& in, int m_max) {
  const double t0 = stampacchia_threshold(in);
  const double gamma = -1.0 / (in.delta - 1.0);
  std::vector<StampacchiaLevel> out;
  for (int m = 0; m <= m_max; ++m)
    out.push_back({m, (1.0 - std::ldexp(1.0, -m)) * t0, std::pow(2.0, m * in.alpha * gamma) * in.phi0});
  return out;
}

struct StampacchiaSimulation {
  std::vector<StampacchiaLevel> levels;
  std::vector<double> phi;  // phi(k_m) with equality in the hypothesis at every step
  double max_excess = 0.0;  // max over m of log(phi(k_m) / bound_m), before clamping
  bool bound_holds = true;

  /// First m with phi(k_m) < tol, or -1.
  int first_below(double tol) const {
    for (std::size_t m = 0; m < phi.size(); ++m)
      if (phi[m] < tol) return static_cast<int>(m);
    return -1;
  }
};

/// Runs phi(k_{m+1}) = c (k_{m+1} - k_m)^{-alpha} phi(k_m)^delta from phi(0) = phi0,
/// the worst case allowed by the hypothesis, in log space. The exact sequence
/// equals the bound, and forward iteration multiplies any rounding error by
/// delta per step, so each step starts from min(phi(k_m), bound_m) as the
/// induction does; the excess before clamping is recorded.
inline StampacchiaSimulation simulate_stampacchia(const StampacchiaInput& in, int m_max) {
  StampacchiaSimulation sim;
  sim.levels = stampacchia_schedule(in, m_max);
  if (in.phi0 == 0.0) {
    sim.phi.assign(sim.levels.size(), 0.0);
    return sim;
  }
  const double t0 = stampacchia_threshold(in);
  const double log_phi0 = std::log(in.phi0);
  const double log_2 = std::log(2.0);
  const double gamma = -1.0 / (in.delta - 1.0);
  double log_phi = log_phi0;
  for (int m = 0; m <= m_max; ++m) {
    const double log_b = m * in.alpha * gamma * log_2 + log_phi0;
    if (m > 0) {
      const double gap = std::ldexp(t0, -m);
      log_phi = std::log(in.c_phi) - in.alpha * std::log(gap) + in.delta * log_phi;
    }
    sim.phi.push_back(std::exp(log_phi));
    const double excess = log_phi - log_b;
    sim.max_excess = std::max(sim.max_excess, excess);
    if (excess > 1e-9 * (1.0 + std::abs(log_b))) sim.bound_holds = false;
    log_phi = std::min(log_phi, log_b);
  }
  return sim;
}

}  // namespace wentzell
