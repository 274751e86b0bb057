#pragma once

#include <cmath>
#include <cstdint>

#include "wentzell/core/operator.hpp"
#include "wentzell/core/random.hpp"

namespace wentzell {

/// Verified sector: every sampled a(u, u) + omega ||j(u)||^2 lies in
/// {r e^{i a} : r >= 0, |a| <= theta}.
struct SectorEstimate {
  double omega = 0.0;
  double theta = 0.0;
  std::size_t samples = 0;
};

/// a(u, u) + omega ||j(u)||^2_H = u^* (S + omega G) u.
inline cplx shifted_form_value(const WentzellOperator& op, double omega, std::span<const cplx> u) {
  return quadratic_form(op.form_matrix(), u, u) + omega * quadratic_form(op.gram(), u, u);
}

inline SectorEstimate sector_estimate(const WentzellOperator& op, double omega, std::size_t n_samples,
                                      std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("sector_estimate: n_samples must be >= 1");
  const CsrMatrix s = linear_combination(1.0, op.form_matrix(), omega, op.gram());
  const double smax = s.max_abs();
  Rng rng(seed);
  SectorEstimate est{omega, 0.0, n_samples};
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector u = random_complex_vector(rng, op.size());
    const cplx val = quadratic_form(s, u, u);
    const double scale = smax * dot(u, u).real();
    if (val.real() < -1e-12 * scale)
      throw SectorViolation("form value with negative real part: " + std::to_string(val.real()), u, val);
    if (std::abs(val) > 0.0) est.theta = std::max(est.theta, std::abs(std::arg(val)));
  }
  return est;
}

}  // namespace wentzell
