#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "wentzell/errors.hpp"
#include "wentzell/fem/assembly.hpp"
#include "wentzell/fem/norms.hpp"
#include "wentzell/fem/product_state.hpp"
#include "wentzell/sparse/bicgstab.hpp"
#include "wentzell/sparse/lu.hpp"

namespace wentzell {

/// omega0 = max(1, -ess inf Re beta, sup |Im beta|).
inline double choose_omega0(const BoundaryCoefficient& beta) {
  return std::max({1.0, -beta.ess_inf_re(), beta.sup_abs_im()});
}

struct SolverOptions {
  enum class Method { direct, bicgstab };
  Method method = Method::direct;
  double tolerance = 1e-12;  // bicgstab only
  std::size_t max_iterations = 5000;
  /// Relative residual accepted after a solve: ||Ax - b|| <= r (||A|| ||x|| + ||b||).
  double residual_check = 1e-9;
};

/// A matrix together with a prepared solver (LU by default).
class LinearSolver {
 public:
  LinearSolver(CsrMatrix a, SolverOptions opt = {}, double lambda_context = 0.0)
      : a_(std::move(a)), opt_(opt), lambda_(lambda_context) {
    if (opt_.method == SolverOptions::Method::direct) {
      try {
        lu_ = std::make_shared<const LuFactorization>(lu_factor(a_));
      } catch (const SingularMatrix& e) {
        throw SolverFailure(std::string("factorization failed: ") + e.what() + context(), lambda_);
      }
    } else {
      precond_ = jacobi_preconditioner(a_);
    }
  }

  Vector solve(std::span<const cplx> b) const {
    Vector x;
    if (lu_) {
      x = lu_->solve(b);
    } else {
      try {
        x = bicgstab(a_, b, opt_.tolerance, opt_.max_iterations, precond_).x;
      } catch (const NoConvergence& e) {
        throw SolverFailure(std::string(e.what()) + context(), lambda_);
      }
    }
    const Vector ax = spmv(a_, x);
    double res = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) res = std::max(res, std::abs(ax[i] - b[i]));
    const double scale = a_.max_abs() * norm_inf(x) + norm_inf(b);
    if (res > opt_.residual_check * scale)
      throw SolverFailure("linear solve residual " + std::to_string(res) + " exceeds tolerance" + context(),
                          lambda_);
    return x;
  }

  const CsrMatrix& matrix() const noexcept { return a_; }

 private:
  std::string context() const {
    return " (lambda = " + std::to_string(lambda_) + ", n = " + std::to_string(a_.nrows()) + ")";
  }

  CsrMatrix a_;
  SolverOptions opt_;
  double lambda_;
  std::shared_ptr<const LuFactorization> lu_;
  Preconditioner precond_;
};

/// The operator associated with the form (a, j) on the discrete space:
/// A = G^{-1} S with S the form matrix and G the Gram matrix of j. For the
/// Wentzell case S = K + B_beta and G = M + B, and A discretizes -Delta^W.
/// A is never formed; it is applied through products with S and solves with G.
///
/// `shifted(s)` returns the operator A + s with form matrix S + s G.
class WentzellOperator {
 public:
  enum class Kind { wentzell, neumann };

  explicit WentzellOperator(std::shared_ptr<const OperatorBundle> bundle)
      : bundle_(std::move(bundle)), kind_(Kind::wentzell) {
    if (!bundle_) throw InvalidArgument("WentzellOperator: null bundle");
    base_form_ = bundle_->stiffness + bundle_->beta_mass;
    gram_ = bundle_->gram;
    omega0_ = choose_omega0(bundle_->beta);
    form_ = base_form_;
  }

  explicit WentzellOperator(const OperatorBundle& bundle)
      : WentzellOperator(std::make_shared<const OperatorBundle>(bundle)) {}

  /// Neumann Laplacian on L2(Omega): no boundary coefficient, no boundary mass.
  static WentzellOperator neumann(std::shared_ptr<const OperatorBundle> bundle) {
    WentzellOperator op(std::move(bundle));
    op.kind_ = Kind::neumann;
    op.base_form_ = op.bundle_->stiffness;
    op.gram_ = op.bundle_->mass();
    op.omega0_ = 0.0;
    op.form_ = op.base_form_;
    return op;
  }

  WentzellOperator shifted(double s) const {
    WentzellOperator op = *this;
    op.shift_ = s;
    op.form_ = s == 0.0 ? base_form_ : linear_combination(1.0, base_form_, s, gram_);
    return op;
  }

  const OperatorBundle& bundle() const noexcept { return *bundle_; }
  const std::shared_ptr<const OperatorBundle>& bundle_ptr() const noexcept { return bundle_; }
  Kind kind() const noexcept { return kind_; }
  double omega0() const noexcept { return omega0_; }
  double shift() const noexcept { return shift_; }
  std::size_t size() const noexcept { return gram_.nrows(); }

  /// S (including the shift).
  const CsrMatrix& form_matrix() const noexcept { return form_; }
  const CsrMatrix& gram() const noexcept { return gram_; }

  /// G (A u) = S u.
  Vector weak_apply(std::span<const cplx> u) const { return spmv(form_, u); }

  /// A u = G^{-1} S u.
  Vector apply(std::span<const cplx> u) const {
    if (!gram_lu_) gram_lu_ = std::make_shared<const LuFactorization>(lu_factor(gram_));
    return gram_lu_->solve(spmv(form_, u));
  }

  /// Inner product of H: (u, v)_G = v^* G u.
  cplx inner(std::span<const cplx> u, std::span<const cplx> v) const { return quadratic_form(gram_, v, u); }
  double norm(std::span<const cplx> u) const { return std::sqrt(std::max(0.0, inner(u, u).real())); }

  ProductState state(Vector coeffs) const { return ProductState(bundle_->boundary_nodes, std::move(coeffs)); }

 private:
  std::shared_ptr<const OperatorBundle> bundle_;
  Kind kind_;
  CsrMatrix base_form_;
  CsrMatrix form_;
  CsrMatrix gram_;
  double omega0_ = 0.0;
  double shift_ = 0.0;
  mutable std::shared_ptr<const LuFactorization> gram_lu_;
};

/// (lambda + A)^{-1}: solves (lambda G + S) u = G rhs. The factorization is
/// built once and reused for every right-hand side.
class Resolvent {
 public:
  Resolvent(const WentzellOperator& op, double lambda, SolverOptions opt = {})
      : op_(&op), lambda_(lambda), solver_(system_matrix(op, lambda), opt, lambda) {}

  Vector apply(std::span<const cplx> rhs) const { return solver_.solve(spmv(op_->gram(), rhs)); }

  ProductState apply(const ProductState& rhs) const { return rhs.with_coeffs(apply(rhs.coeffs())); }

  /// Solves (lambda G + S) u = load for an arbitrary load vector.
  Vector solve_load(std::span<const cplx> load) const { return solver_.solve(load); }

  double lambda() const noexcept { return lambda_; }

 private:
  static CsrMatrix system_matrix(const WentzellOperator& op, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("resolvent: lambda must be positive");
    return linear_combination(lambda, op.gram(), 1.0, op.form_matrix());
  }

  const WentzellOperator* op_;
  double lambda_;
  LinearSolver solver_;
};

inline ProductState resolvent_apply(const WentzellOperator& op, double lambda, const ProductState& rhs,
                                    SolverOptions opt = {}) {
  return Resolvent(op, lambda, opt).apply(rhs);
}

namespace detail {

inline double resolve_omega0(const OperatorBundle& b, std::optional<double> omega0) {
  return omega0 ? *omega0 : choose_omega0(b.beta);
}

inline ProductState robin_from_load(const OperatorBundle& b, double lambda, const Vector& load,
                                    SolverOptions opt) {
  const CsrMatrix a = linear_combination(lambda, b.gram, 1.0, b.stiffness + b.beta_mass);
  return ProductState(b, LinearSolver(a, opt, lambda).solve(load));
}

}  // namespace detail

/// Galerkin solution of  lambda u - Delta u = f in Omega,
///                       d_nu u + (lambda + beta) u = g on Gamma,
/// i.e. (lambda G + K + B_beta) u = M f + B g. `f` is nodal, `g` lives on the
/// boundary nodes.
inline ProductState robin_solve(const OperatorBundle& b, double lambda, std::span<const cplx> f,
                                std::span<const cplx> g, std::optional<double> omega0 = {},
                                SolverOptions opt = {}) {
  const double w0 = detail::resolve_omega0(b, omega0);
  if (lambda < w0)
    throw InvalidArgument("robin_solve: lambda = " + std::to_string(lambda) + " is below omega0 = " +
                          std::to_string(w0));
  const Vector load = axpby(1.0, interior_load(b, f), 1.0, boundary_load(b, g));
  return detail::robin_from_load(b, lambda, load, opt);
}

/// As above with boundary data given per edge endpoint (may jump at corners).
inline ProductState robin_solve_edgewise(const OperatorBundle& b, double lambda, std::span<const cplx> f,
                                         std::span<const std::array<cplx, 2>> g,
                                         std::optional<double> omega0 = {}, SolverOptions opt = {}) {
  const double w0 = detail::resolve_omega0(b, omega0);
  if (lambda < w0)
    throw InvalidArgument("robin_solve: lambda = " + std::to_string(lambda) + " is below omega0 = " +
                          std::to_string(w0));
  const Vector load = axpby(1.0, interior_load(b, f), 1.0, boundary_load_edgewise(b, g));
  return detail::robin_from_load(b, lambda, load, opt);
}

}  // namespace wentzell
