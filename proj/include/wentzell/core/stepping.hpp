#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wentzell/core/operator.hpp"

namespace wentzell {

/// Backward Euler: (G + dt S) u+ = G u. The system is factored once.
/// dt = 0 gives the identity.
class ImplicitEulerStepper {
 public:
  ImplicitEulerStepper(const WentzellOperator& op, double dt, SolverOptions opt = {}) : op_(&op), dt_(dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw InvalidArgument("implicit Euler: dt must be >= 0");
    if (dt > 0.0) solver_.emplace(linear_combination(1.0, op.gram(), dt, op.form_matrix()), opt, 1.0 / dt);
  }

  Vector step(std::span<const cplx> u) const {
    if (!solver_) return Vector(u.begin(), u.end());
    return solver_->solve(spmv(op_->gram(), u));
  }
  ProductState step(const ProductState& s) const { return s.with_coeffs(step(s.coeffs())); }

  double dt() const noexcept { return dt_; }

 private:
  const WentzellOperator* op_;
  double dt_;
  std::optional<LinearSolver> solver_;
};

/// Crank-Nicolson: (G + dt/2 S) u+ = (G - dt/2 S) u.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const WentzellOperator& op, double dt, SolverOptions opt = {}) : dt_(dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw InvalidArgument("Crank-Nicolson: dt must be >= 0");
    if (dt > 0.0) {
      solver_.emplace(linear_combination(1.0, op.gram(), dt / 2.0, op.form_matrix()), opt, 2.0 / dt);
      explicit_part_ = linear_combination(1.0, op.gram(), -dt / 2.0, op.form_matrix());
    }
  }

  Vector step(std::span<const cplx> u) const {
    if (!solver_) return Vector(u.begin(), u.end());
    return solver_->solve(spmv(explicit_part_, u));
  }
  ProductState step(const ProductState& s) const { return s.with_coeffs(step(s.coeffs())); }

  double dt() const noexcept { return dt_; }

 private:
  double dt_;
  std::optional<LinearSolver> solver_;
  CsrMatrix explicit_part_;
};

inline ProductState step_implicit_euler(const WentzellOperator& op, const ProductState& state, double dt) {
  return ImplicitEulerStepper(op, dt).step(state);
}

inline ProductState step_crank_nicolson(const WentzellOperator& op, const ProductState& state, double dt) {
  return CrankNicolsonStepper(op, dt).step(state);
}

/// (I + (t/n) A)^{-n} state, i.e. n backward Euler steps of size t/n.
inline ProductState euler_exponential(const WentzellOperator& op, const ProductState& state, double t,
                                      std::size_t n) {
  if (!(t >= 0.0)) throw InvalidArgument("euler_exponential: t must be >= 0");
  if (n < 1) throw InvalidArgument("euler_exponential: n must be >= 1");
  if (t == 0.0) return state;
  const ImplicitEulerStepper stepper(op, t / static_cast<double>(n));
  Vector u = state.coeffs();
  for (std::size_t k = 0; k < n; ++k) u = stepper.step(u);
  return state.with_coeffs(std::move(u));
}

enum class Scheme { implicit_euler, crank_nicolson };

inline Scheme parse_scheme(const std::string& s) {
  if (s == "implicit-euler") return Scheme::implicit_euler;
  if (s == "crank-nicolson") return Scheme::crank_nicolson;
  throw InvalidArgument("unknown scheme '" + s + "' (expected implicit-euler or crank-nicolson)");
}

inline std::string to_string(Scheme s) {
  return s == Scheme::implicit_euler ? "implicit-euler" : "crank-nicolson";
}

struct Observation {
  double t = 0.0;
  cplx mass;         // 1^T G u
  double sup_norm = 0.0;
  double h1_norm = 0.0;
  cplx energy;       // u^* S u
};

inline Observation observe(const WentzellOperator& op, double t, std::span<const cplx> u) {
  Observation o;
  o.t = t;
  o.mass = dot(ones(u.size()), spmv(op.gram(), u));
  o.sup_norm = norm_inf(u);
  o.h1_norm = h1_norm(op.bundle(), u);
  o.energy = quadratic_form(op.form_matrix(), u, u);
  return o;
}

struct Trajectory {
  std::vector<Observation> observations;
  std::vector<ProductState> states;  // empty unless requested
  bool aborted = false;
  std::string abort_reason;
};

struct EvolveOptions {
  bool keep_states = false;
  SolverOptions solver;
  /// Called after every recorded step, including t = 0.
  std::function<void(const Observation&, const ProductState&)> observer;
};

/// Time grid 0, dt, 2 dt, ..., t_final; the last step is shortened if dt does
/// not divide t_final. A solver failure ends the run with `aborted` set and the
/// steps computed so far kept.
inline Trajectory evolve(const WentzellOperator& op, const ProductState& initial, double t_final, double dt,
                         Scheme scheme, const EvolveOptions& opt = {}) {
  if (!(t_final >= 0.0)) throw InvalidArgument("evolve: t_final must be >= 0");
  if (!(dt > 0.0)) throw InvalidArgument("evolve: dt must be > 0");
  require_same_size(initial.size(), op.size(), "evolve");

  Trajectory tr;
  auto record = [&](double t, const ProductState& s) {
    tr.observations.push_back(observe(op, t, s.coeffs()));
    if (opt.keep_states) tr.states.push_back(s);
    if (opt.observer) opt.observer(tr.observations.back(), s);
  };
  record(0.0, initial);

  const auto n = static_cast<std::size_t>(std::ceil(t_final / dt * (1.0 - 1e-12)));
  if (n == 0) return tr;
  const double last = t_final - static_cast<double>(n - 1) * dt;

  auto make = [&](double h) -> std::function<Vector(std::span<const cplx>)> {
    if (scheme == Scheme::implicit_euler) {
      auto s = std::make_shared<ImplicitEulerStepper>(op, h, opt.solver);
      return [s](std::span<const cplx> u) { return s->step(u); };
    }
    auto s = std::make_shared<CrankNicolsonStepper>(op, h, opt.solver);
    return [s](std::span<const cplx> u) { return s->step(u); };
  };

  ProductState state = initial;
  try {
    const auto full = make(dt);
    const auto tail = std::abs(last - dt) <= 1e-14 * dt ? full : make(last);
    for (std::size_t k = 1; k <= n; ++k) {
      state = state.with_coeffs(k == n ? tail(state.coeffs()) : full(state.coeffs()));
      record(k == n ? t_final : static_cast<double>(k) * dt, state);
    }
  } catch (const SolverFailure& e) {
    tr.aborted = true;
    tr.abort_reason = e.what();
  }
  return tr;
}

}  // namespace wentzell
