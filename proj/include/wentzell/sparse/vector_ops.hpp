#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "wentzell/errors.hpp"

namespace wentzell {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

inline void require_same_size(std::size_t a, std::size_t b, const char* where) {
  if (a != b)
    throw InvalidArgument(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
}

/// Sesquilinear dot product, conjugate-linear in the first argument: sum conj(u_i) v_i.
inline cplx dot(std::span<const cplx> u, std::span<const cplx> v) {
  require_same_size(u.size(), v.size(), "dot");
  cplx s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

inline double norm2(std::span<const cplx> u) {
  double s = 0.0;
  for (const auto& z : u) s += std::norm(z);
  return std::sqrt(s);
}

inline double norm_inf(std::span<const cplx> u) {
  double m = 0.0;
  for (const auto& z : u) m = std::max(m, std::abs(z));
  return m;
}

inline Vector axpby(cplx a, std::span<const cplx> x, cplx b, std::span<const cplx> y) {
  require_same_size(x.size(), y.size(), "axpby");
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + b * y[i];
  return r;
}

inline Vector subtract(std::span<const cplx> x, std::span<const cplx> y) {
  return axpby(1.0, x, -1.0, y);
}

inline Vector scaled(cplx a, std::span<const cplx> x) {
  Vector r(x.begin(), x.end());
  for (auto& z : r) z *= a;
  return r;
}

inline Vector ones(std::size_t n) { return Vector(n, cplx{1.0, 0.0}); }

}  // namespace wentzell
