#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "wentzell/core/operator.hpp"
#include "wentzell/fem/norms.hpp"
#include "wentzell/verify/report.hpp"
#include "wentzell/verify/stampacchia.hpp"

namespace wentzell {

/// Exponents of the level-set argument in two dimensions.
struct LevelSetExponents {
  double p = 0.0;
  double q = 0.0;
  double two_star = 0.0;  // 2* > 2p/(p-1)
  double s = 0.0;         // s > 2q/(q-1)
  double delta = 0.0;     // min{(1 - 1/p - 1/2*) 2*, (1 - 1/q - 1/s) s}
};

/// Default choice 2* = 4p/(p-1), s = 4q/(q-1), which gives delta = 3.
inline LevelSetExponents level_set_exponents(double p, double q, std::optional<double> two_star = {},
                                             std::optional<double> s = {}) {
  if (!(p > 1.0)) throw InvalidArgument("level set exponents: p must be > 1");
  if (!(q > 1.0)) throw InvalidArgument("level set exponents: q must be > 1");
  LevelSetExponents e;
  e.p = p;
  e.q = q;
  e.two_star = two_star.value_or(std::isinf(p) ? 4.0 : 4.0 * p / (p - 1.0));
  e.s = s.value_or(std::isinf(q) ? 4.0 : 4.0 * q / (q - 1.0));
  const double lo_2 = std::isinf(p) ? 2.0 : 2.0 * p / (p - 1.0);
  const double lo_s = std::isinf(q) ? 2.0 : 2.0 * q / (q - 1.0);
  if (!(e.two_star > lo_2)) throw InvalidArgument("level set exponents: need 2* > 2p/(p-1)");
  if (!(e.s > lo_s)) throw InvalidArgument("level set exponents: need s > 2q/(q-1)");
  e.delta = std::min((1.0 - 1.0 / p - 1.0 / e.two_star) * e.two_star, (1.0 - 1.0 / q - 1.0 / e.s) * e.s);
  if (!(e.delta > 1.0)) throw InvalidArgument("level set exponents: delta must be > 1");
  return e;
}

/// |Omega_k|, sigma(Gamma_k) and phi(k) = |Omega_k| + sigma(Gamma_k)^{2*/s}
/// measured with lumped nodal weights.
struct LevelSetProfile {
  std::vector<double> k;
  std::vector<double> omega_measure;
  std::vector<double> gamma_measure;
  std::vector<double> phi;
  LevelSetExponents exponents;
};

namespace detail {

struct LevelSetEvaluator {
  const OperatorBundle& b;
  std::span<const cplx> u;
  double power;  // 2*/s

  std::array<double, 3> operator()(double k) const {
    double om = 0.0, ga = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (std::abs(u[i]) > k) {
        om += b.interior_weights[i];
        ga += b.boundary_weights[i];
      }
    }
    return {om, ga, om + std::pow(ga, power)};
  }
};

}  // namespace detail

inline LevelSetProfile level_set_profile(const OperatorBundle& b, std::span<const cplx> u,
                                         const std::vector<double>& thresholds, const LevelSetExponents& e) {
  require_same_size(u.size(), b.n_total(), "level_set_profile");
  LevelSetProfile prof;
  prof.exponents = e;
  prof.k = thresholds;
  std::sort(prof.k.begin(), prof.k.end());
  const detail::LevelSetEvaluator eval{b, u, e.two_star / e.s};
  for (double k : prof.k) {
    const auto [om, ga, ph] = eval(k);
    prof.omega_measure.push_back(om);
    prof.gamma_measure.push_back(ga);
    prof.phi.push_back(ph);
  }
  return prof;
}

/// k_i = U (1 - 2^{-i/4}) for i < n - 1 and k_{n-1} = U: geometric in the gap to U.
inline std::vector<double> level_set_grid(double sup_norm, std::size_t n = 64) {
  std::vector<double> k;
  for (std::size_t i = 0; i + 1 < n; ++i) k.push_back(sup_norm * (1.0 - std::exp2(-static_cast<double>(i) / 4.0)));
  k.push_back(sup_norm);
  return k;
}

struct LinftyCertificate {
  double t0 = 0.0;
  double sup_norm = 0.0;
  double c_hat = 0.0;
  double phi0 = 0.0;
  bool certified = false;
  bool degenerate = false;
  bool energy_ok = true;
  double energy_worst = 0.0;  // max of (lhs - rhs) / scale over the grid
  std::size_t refinements = 0;
  LevelSetProfile profile;
  Report report;
};

/// Sup-norm certificate for the Robin solution u of (lambda G + K + B_beta) u = load.
///
/// The constant c of the Stampacchia hypothesis is fitted on the grid pairs,
/// then raised until the hypothesis also holds along the sequence
/// k_m = (1 - 2^{-m}) t0 on which the lemma's induction runs. Along that
/// sequence phi(k_m) <= 2^{-m alpha/(delta-1)} phi(0), so t0 bounds ||u||_inf.
/// The energy inequality min(1, lambda) ||v_k||^2_{H^1} <= Re v_k^* load with
/// v_k = (|u| - k)^+ sign u is checked at each grid threshold.
inline LinftyCertificate linfty_certify_load(const OperatorBundle& b, double lambda, std::span<const cplx> u,
                                             std::span<const cplx> load, const LevelSetExponents& e) {
  require_same_size(u.size(), b.n_total(), "linfty_certify(u)");
  require_same_size(load.size(), b.n_total(), "linfty_certify(load)");
  LinftyCertificate c;
  c.sup_norm = norm_inf(u);
  c.profile = level_set_profile(b, u, level_set_grid(c.sup_norm), e);
  c.report = Report("linfty-certificate");
  c.report.set("mesh", b.mesh->id()).set("beta", b.beta.description());
  c.report.set("p", e.p).set("q", e.q).set("two_star", e.two_star).set("s", e.s).set("delta", e.delta);

  const auto& k = c.profile.k;
  const auto& phi = c.profile.phi;
  c.phi0 = phi.front();

  // Energy inequality at every grid threshold.
  const double alpha_coercive = std::min(1.0, lambda);
  const CsrMatrix h1 = b.h1_gram();
  for (double kk : k) {
    Vector v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = std::abs(u[i]);
      v[i] = r > kk ? (r - kk) / r * u[i] : cplx{};
    }
    const double lhs = alpha_coercive * quadratic_form(h1, v, v).real();
    const double rhs = dot(v, load).real();
    const double scale = std::max({lhs, std::abs(rhs), 1e-300});
    const double excess = (lhs - rhs) / scale;
    c.energy_worst = std::max(c.energy_worst, excess);
    if (excess > 1e-9) c.energy_ok = false;
  }

  if (c.sup_norm == 0.0 || c.phi0 == 0.0) {
    c.degenerate = true;
    c.t0 = c.sup_norm;
    c.certified = true;
  } else {
    const double a = e.two_star;
    for (std::size_t i = 0; i < k.size(); ++i)
      for (std::size_t j = i + 1; j < k.size(); ++j)
        if (phi[j] > 0.0) c.c_hat = std::max(c.c_hat, phi[j] * std::pow(k[j] - k[i], a) / std::pow(phi[i], e.delta));

    const detail::LevelSetEvaluator eval{b, u, e.two_star / e.s};
    for (;; ++c.refinements) {
      if (c.refinements > 200) break;
      c.t0 = stampacchia_threshold({c.c_hat, a, e.delta, c.phi0});
      bool raised = false;
      double prev = c.phi0;
      for (int m = 1; m < 2000 && prev > 0.0; ++m) {
        const double km = (1.0 - std::ldexp(1.0, -m)) * c.t0;
        const double cur = eval(km)[2];
        const double need = cur * std::pow(std::ldexp(c.t0, -m), a) / std::pow(prev, e.delta);
        if (need > c.c_hat * (1.0 + 1e-12)) {
          c.c_hat = need;
          raised = true;
          break;
        }
        prev = cur;
      }
      if (!raised) break;
    }
    c.certified = c.sup_norm <= c.t0 * (1.0 + 1e-9);
  }

  c.report.set("sup_norm", c.sup_norm).set("t0", c.t0).set("c_hat", c.c_hat).set("phi0", c.phi0);
  c.report.set("degenerate", c.degenerate).set("refinements", c.refinements);
  c.report.set("energy_worst_excess", c.energy_worst);
  c.report.check("certified", c.certified).check("energy_inequality", c.energy_ok);
  return c;
}

/// As above with nodal interior data f and boundary-node data g (load M f + B g).
inline LinftyCertificate linfty_certify(const OperatorBundle& b, double lambda, std::span<const cplx> u,
                                        std::span<const cplx> f, std::span<const cplx> g, double p, double q) {
  const auto e = level_set_exponents(p, q);
  const Vector load = axpby(1.0, interior_load(b, f), 1.0, boundary_load(b, g));
  return linfty_certify_load(b, lambda, u, load, e);
}

}  // namespace wentzell
