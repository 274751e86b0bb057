#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wentzell/errors.hpp"
#include "wentzell/sparse/csr.hpp"

namespace wentzell {

using Preconditioner = std::function<Vector(std::span<const cplx>)>;

inline Preconditioner identity_preconditioner() {
  return [](std::span<const cplx> r) { return Vector(r.begin(), r.end()); };
}

inline Preconditioner jacobi_preconditioner(const CsrMatrix& a) {
  Vector d = a.diagonal_entries();
  for (auto& x : d) {
    if (x == cplx{0.0, 0.0}) throw InvalidArgument("jacobi_preconditioner: zero diagonal entry");
    x = 1.0 / x;
  }
  return [d = std::move(d)](std::span<const cplx> r) {
    Vector z(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) z[i] = d[i] * r[i];
    return z;
  };
}

struct IterativeResult {
  Vector x;
  std::size_t iterations = 0;
  /// ||b - A x_k|| after each iteration.
  std::vector<double> residual_history;
};

/// Right-preconditioned BiCGSTAB from a zero initial guess.
///
/// Succeeds when ||A x - b|| <= tol ||b|| holds for the true residual. Breakdown
/// or exhausting `maxit` throws NoConvergence with the best iterate seen.
inline IterativeResult bicgstab(const CsrMatrix& a, std::span<const cplx> b, double tol,
                                std::size_t maxit, const Preconditioner& precond = {}) {
  if (a.nrows() != a.ncols()) throw InvalidArgument("bicgstab: matrix not square");
  require_same_size(a.nrows(), b.size(), "bicgstab");
  const Preconditioner m = precond ? precond : identity_preconditioner();
  const std::size_t n = b.size();
  IterativeResult out;
  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return out;

  Vector best = out.x;
  double best_res = bnorm;
  auto true_residual = [&](const Vector& x) {
    Vector ax = spmv(a, x);
    return axpby(1.0, b, -1.0, ax);
  };

  Vector r(b.begin(), b.end());
  Vector rhat = r;
  Vector p(n, 0.0), v(n, 0.0);
  cplx rho = 1.0, alpha = 1.0, omega = 1.0;
  std::string failure = "maximum iterations reached";

  while (out.iterations < maxit) {
    const cplx rho_new = dot(rhat, r);
    if (std::abs(rho_new) <= 1e-300) {
      failure = "breakdown: rho vanished";
      break;
    }
    const cplx beta = (rho_new / rho) * (alpha / omega);
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    const Vector phat = m(p);
    v = spmv(a, phat);
    const cplx rv = dot(rhat, v);
    if (std::abs(rv) <= 1e-300) {
      failure = "breakdown: <rhat, v> vanished";
      break;
    }
    alpha = rho_new / rv;
    Vector s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    const Vector shat = m(s);
    const Vector t = spmv(a, shat);
    const double tt = std::real(dot(t, t));
    omega = tt > 0.0 ? dot(t, s) / tt : cplx{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * t[i];
    }
    rho = rho_new;
    ++out.iterations;
    double res = norm2(r);
    if (res <= tol * bnorm) {
      // recurrence residuals drift; confirm with the true residual and restart if needed
      r = true_residual(out.x);
      res = norm2(r);
      rhat = r;
      rho = alpha = omega = 1.0;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
    }
    out.residual_history.push_back(res);
    if (res < best_res) {
      best_res = res;
      best = out.x;
    }
    if (res <= tol * bnorm) return out;
    if (omega == cplx{0.0, 0.0}) {
      failure = "breakdown: omega vanished";
      break;
    }
  }
  throw NoConvergence("bicgstab: " + failure + " after " + std::to_string(out.iterations) +
                          " iterations, relative residual " + std::to_string(best_res / bnorm),
                      std::move(best), std::move(out.residual_history));
}

}  // namespace wentzell
