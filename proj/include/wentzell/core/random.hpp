#pragma once

#include <cstdint>
#include <random>

#include "wentzell/sparse/vector_ops.hpp"

namespace wentzell {

using Rng = std::mt19937_64;

/// Entries with real and imaginary parts uniform in [-1, 1].
inline Vector random_complex_vector(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vector v(n);
  for (auto& z : v) {
    const double re = d(rng);
    z = cplx(re, d(rng));
  }
  return v;
}

inline Vector random_real_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vector v(n);
  for (auto& z : v) z = d(rng);
  return v;
}

/// Entries drawn from {-1, +1}.
inline Vector random_sign_vector(Rng& rng, std::size_t n) {
  std::bernoulli_distribution d(0.5);
  Vector v(n);
  for (auto& z : v) z = d(rng) ? 1.0 : -1.0;
  return v;
}

}  // namespace wentzell
