#pragma once

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wentzell/core/operator.hpp"
#include "wentzell/core/random.hpp"
#include "wentzell/verify/report.hpp"

namespace wentzell {

/// Q z = z for |z| <= 1, z / |z| otherwise.
inline cplx project_unit_ball(cplx z) {
  const double r = std::abs(z);
  if (r <= 1.0) return z;
  // z / r can round to modulus 1 + ulp; shrink so that Q is idempotent.
  cplx w = z / r;
  while (std::abs(w) > 1.0) w *= 1.0 - std::numeric_limits<double>::epsilon();
  return w;
}

inline Vector project_unit_ball(std::span<const cplx> u) {
  Vector r(u.size());
  std::transform(u.begin(), u.end(), r.begin(), [](cplx z) { return project_unit_ball(z); });
  return r;
}

/// (Q u, Q_Gamma u_Gamma). Both components are nodal truncations of the same
/// coefficients, so the result stays trace consistent.
inline ProductState project_unit_ball(const ProductState& s) { return s.with_coeffs(project_unit_ball(s.coeffs())); }

struct ProjectionInequality {
  double stiffness_term = 0.0;  // Re (u - w)^* K w
  double form_term = 0.0;       // Re a_omega0(w, u - w)
  double scale = 0.0;
  Report report;
};

/// Evaluates the truncation inequalities for w = Q u.
inline ProjectionInequality check_projection_inequality(const OperatorBundle& b, std::span<const cplx> u) {
  require_same_size(u.size(), b.n_total(), "check_projection_inequality");
  const Vector w = project_unit_ball(u);
  const Vector d = subtract(u, w);
  const double omega0 = choose_omega0(b.beta);
  const CsrMatrix s = shifted_form_matrix(b, omega0);
  ProjectionInequality r;
  r.stiffness_term = quadratic_form(b.stiffness, d, w).real();
  r.form_term = quadratic_form(s, d, w).real();
  r.scale = s.max_abs() * dot(u, u).real();
  r.report = Report("projection-inequality");
  r.report.set("mesh", b.mesh->id()).set("beta", b.beta.description());
  r.report.set("omega0", omega0).set("stiffness_term", r.stiffness_term).set("form_term", r.form_term);
  r.report.check("stiffness_term_nonnegative", r.stiffness_term >= -1e-10 * r.scale);
  r.report.check("form_term_nonnegative", r.form_term >= -1e-10 * r.scale);
  return r;
}

/// A projection onto a closed convex set of H, applied to nodal vectors.
struct ConvexProjection {
  std::string name;
  std::function<Vector(std::span<const cplx>)> apply;

  static ConvexProjection identity() {
    return {"identity", [](std::span<const cplx> u) { return Vector(u.begin(), u.end()); }};
  }
  /// |u| <= 1 in Omega and |u_Gamma| <= 1 on Gamma.
  static ConvexProjection unit_ball() {
    return {"unit-ball", [](std::span<const cplx> u) { return project_unit_ball(u); }};
  }
  /// Nonnegative real functions: u -> (Re u)^+.
  static ConvexProjection real_cone() {
    return {"real-cone", [](std::span<const cplx> u) {
              Vector r(u.size());
              for (std::size_t i = 0; i < u.size(); ++i) r[i] = std::max(0.0, u[i].real());
              return r;
            }};
  }
};

struct InvarianceResult {
  std::vector<double> lambdas;
  std::vector<double> max_violation;  // per lambda, max |P x - x|, x = lambda R(lambda) P h
  double worst = 0.0;
  Report report;
};

/// Checks lambda R(lambda) C subset of C on random samples h with real and
/// imaginary parts uniform in [-2, 2].
inline InvarianceResult invariance_harness(const WentzellOperator& op, const ConvexProjection& p,
                                           const std::vector<double>& lambdas, std::size_t n_samples,
                                           std::uint64_t seed, double tol = 5e-3) {
  Rng rng(seed);
  std::vector<Vector> samples;
  for (std::size_t k = 0; k < n_samples; ++k) {
    Vector h = scaled(2.0, random_complex_vector(rng, op.size()));
    Vector ph = p.apply(h);
    const Vector pph = p.apply(ph);
    double defect = 0.0;
    for (std::size_t i = 0; i < ph.size(); ++i) defect = std::max(defect, std::abs(pph[i] - ph[i]));
    if (defect > 1e-12 * (1.0 + norm_inf(ph)))
      throw InvalidArgument("invariance_harness: projection '" + p.name + "' is not idempotent");
    samples.push_back(std::move(ph));
  }
  InvarianceResult r;
  r.lambdas = lambdas;
  for (double lambda : lambdas) {
    const Resolvent res(op, lambda);
    double worst = 0.0;
    for (const auto& ph : samples) {
      const Vector x = scaled(lambda, res.apply(ph));
      const Vector px = p.apply(x);
      for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(px[i] - x[i]));
    }
    r.max_violation.push_back(worst);
    r.worst = std::max(r.worst, worst);
  }
  r.report = Report("invariance");
  r.report.context(op.bundle(), seed).set("projection", p.name).set("shift", op.shift());
  r.report.set("lambdas", r.lambdas).set("max_violation", r.max_violation).set("samples", n_samples);
  r.report.check("invariant", r.worst <= tol);
  return r;
}

/// ||lambda (lambda + A + shift)^{-1} h||_inf / ||h||_inf for one sample.
inline double sup_resolvent_ratio(const Resolvent& res, std::span<const cplx> h) {
  return norm_inf(scaled(res.lambda(), res.apply(h))) / norm_inf(h);
}

struct SupResolventOptions {
  enum class Samples { complex_box, signs };
  /// Shift applied before taking resolvents; defaults to the operator's omega0.
  std::optional<double> shift;
  Samples samples = Samples::complex_box;
  double tol = 5e-3;
};

struct SupResolventResult {
  std::vector<double> lambdas;
  std::vector<double> ratio;  // per lambda, max over samples
  double worst = 0.0;
  double shift = 0.0;
  Report report;
};

inline SupResolventResult sup_resolvent_bound(const WentzellOperator& op, const std::vector<double>& lambdas,
                                              std::size_t n_samples, std::uint64_t seed,
                                              const SupResolventOptions& opt = {}) {
  SupResolventResult r;
  r.shift = opt.shift.value_or(op.omega0());
  const WentzellOperator shifted = op.shifted(op.shift() + r.shift);
  Rng rng(seed);
  std::vector<Vector> samples;
  for (std::size_t k = 0; k < n_samples; ++k)
    samples.push_back(opt.samples == SupResolventOptions::Samples::signs ? random_sign_vector(rng, op.size())
                                                                          : random_complex_vector(rng, op.size()));
  r.lambdas = lambdas;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw InvalidArgument("sup_resolvent_bound: lambda must be positive");
    const Resolvent res(shifted, lambda);
    double worst = 0.0;
    for (const auto& h : samples) worst = std::max(worst, sup_resolvent_ratio(res, h));
    r.ratio.push_back(worst);
    r.worst = std::max(r.worst, worst);
  }
  r.report = Report("sup-resolvent");
  r.report.context(op.bundle(), seed).set("shift", r.shift).set("samples", n_samples);
  r.report.set("lambdas", r.lambdas).set("ratio", r.ratio);
  r.report.check("contractive", r.worst <= 1.0 + opt.tol);
  return r;
}

}  // namespace wentzell
