#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wentzell/core/sector.hpp"
#include "wentzell/mesh/generate.hpp"
#include "wentzell/verify/density.hpp"
#include "wentzell/verify/level_set.hpp"
#include "wentzell/verify/neumann.hpp"
#include "wentzell/verify/projection.hpp"
#include "wentzell/verify/stampacchia.hpp"
#include "wentzell/verify/trace.hpp"

using namespace wentzell;

namespace {

std::shared_ptr<const OperatorBundle> make_bundle(std::size_t n, cplx beta,
                                                  MassLumping l = MassLumping::consistent) {
  auto m = std::make_shared<const TriMesh>(generate_rectangle(1, 1, n, n));
  return std::make_shared<const OperatorBundle>(assemble(m, BoundaryCoefficient::constant(*m, beta), l));
}

oracle::Dense dense(const CsrMatrix& a) { return {a.nrows(), a.ncols(), a.to_dense()}; }

SmoothField linear_x() {
  return {[](Point p) { return cplx(p.x); }, [](Point) { return std::array<cplx, 2>{1.0, 0.0}; },
          [](Point) { return cplx(0.0); }};
}

SmoothField constant_field(cplx c) {
  return {[c](Point) { return c; }, [](Point) { return std::array<cplx, 2>{0.0, 0.0}; },
          [](Point) { return cplx(0.0); }};
}

}  // namespace

// ---------------------------------------------------------------- projection

TEST(ProjectUnitBall, Examples) {
  EXPECT_EQ(project_unit_ball(cplx(0.5)), cplx(0.5));
  const cplx z = 2.0 * std::polar(1.0, std::numbers::pi / 4);
  EXPECT_NEAR(std::abs(project_unit_ball(z) - std::polar(1.0, std::numbers::pi / 4)), 0.0, 1e-15);
  EXPECT_EQ(project_unit_ball(cplx(-3.0)), cplx(-1.0));
  EXPECT_EQ(project_unit_ball(cplx(0.0)), cplx(0.0));
}

TEST(ProjectUnitBall, IdempotentAndNonexpansiveOnRandomPairs) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 10000; ++k) {
    const cplx z(u(rng), u(rng)), w(u(rng), u(rng));
    const cplx qz = project_unit_ball(z), qw = project_unit_ball(w);
    EXPECT_LE(std::abs(qz), 1.0 + 1e-15);
    EXPECT_EQ(project_unit_ball(qz), qz);
    // Metric projection onto a convex set is 1-Lipschitz.
    EXPECT_LE(std::abs(qz - qw), std::abs(z - w) * (1 + 1e-14) + 1e-15);
  }
}

TEST(ProjectUnitBall, TruncationIdentities) {
  Rng rng(2);
  const Vector u = scaled(3.0, random_complex_vector(rng, 500));
  const Vector q = project_unit_ball(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double excess = std::max(0.0, std::abs(u[i]) - 1.0);
    const cplx sign = u[i] / std::abs(u[i]);
    EXPECT_NEAR(std::abs((u[i] - q[i]) - excess * sign), 0.0, 1e-14);
    const cplx prod = q[i] * std::conj(u[i] - q[i]);
    EXPECT_NEAR(prod.real(), excess, 1e-14);
    EXPECT_NEAR(prod.imag(), 0.0, 1e-14);
  }
}

TEST(ProjectUnitBall, StateKeepsTraceConsistency) {
  const auto b = make_bundle(4, 0.0);
  Rng rng(3);
  const ProductState s(*b, scaled(3.0, random_complex_vector(rng, b->n_total())));
  const auto q = project_unit_ball(s);
  EXPECT_EQ(q.boundary_trace(), project_unit_ball(s.boundary_trace()));
}

TEST(ProjectionInequality, FixedPointGivesZero) {
  const auto b = make_bundle(6, cplx(1, 1));
  Rng rng(4);
  const Vector u = scaled(0.5, random_complex_vector(rng, b->n_total()));
  const auto r = check_projection_inequality(*b, u);
  EXPECT_EQ(r.stiffness_term, 0.0);
  EXPECT_EQ(r.form_term, 0.0);
  EXPECT_TRUE(r.report.passed());
}

TEST(ProjectionInequality, ConstantTwo) {
  const auto b = make_bundle(6, 0.0);
  const auto r = check_projection_inequality(*b, Vector(b->n_total(), 2.0));
  EXPECT_NEAR(r.stiffness_term, 0.0, 1e-12);
}

TEST(ProjectionInequality, RandomOnNonobtuseLumpedMesh) {
  for (cplx beta : {cplx(0.0), cplx(-1, 2), cplx(3, -1)}) {
    const auto b = make_bundle(12, beta, MassLumping::lumped);
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
      const auto r = check_projection_inequality(*b, scaled(3.0, random_complex_vector(rng, b->n_total())));
      EXPECT_GE(r.form_term, -1e-10 * r.scale);
      EXPECT_GE(r.stiffness_term, -1e-10 * r.scale);
      EXPECT_TRUE(r.report.passed());
    }
  }
}

TEST(Invariance, IdentityIsTriviallyInvariant) {
  const WentzellOperator op(make_bundle(6, cplx(1, 1)));
  const auto r = invariance_harness(op, ConvexProjection::identity(), {1, 10}, 5, 1);
  EXPECT_EQ(r.worst, 0.0);
  EXPECT_TRUE(r.report.passed());
}

TEST(Invariance, UnitBallUnderShiftedWentzellOperator) {
  const WentzellOperator base(make_bundle(64, cplx(-1, 2), MassLumping::lumped));
  const auto op = base.shifted(base.omega0());
  const auto r = invariance_harness(op, ConvexProjection::unit_ball(), {1, 10, 100}, 50, 7);
  EXPECT_LE(r.worst, 5e-3);
  EXPECT_TRUE(r.report.passed());
  EXPECT_EQ(r.report.data()["seed"], 7);
}

TEST(Invariance, RealConeUnderNeumannOperator) {
  const auto op = WentzellOperator::neumann(make_bundle(16, 0.0, MassLumping::lumped));
  const auto r = invariance_harness(op, ConvexProjection::real_cone(), {1, 10, 100}, 30, 8, 1e-12);
  EXPECT_LE(r.worst, 1e-12);
}

TEST(Invariance, NonIdempotentProjectionRejected) {
  const WentzellOperator op(make_bundle(4, 0.0));
  const ConvexProjection halve{"halve", [](std::span<const cplx> u) { return scaled(0.5, u); }};
  EXPECT_THROW(invariance_harness(op, halve, {1}, 3, 1), InvalidArgument);
}

TEST(SupResolvent, ConstantWithZeroShiftIsExactlyOne) {
  const WentzellOperator op(make_bundle(8, 0.0, MassLumping::lumped));
  const Resolvent res(op, 3.0);
  EXPECT_NEAR(sup_resolvent_ratio(res, ones(op.size())), 1.0, 1e-12);
  SupResolventOptions o;
  o.shift = 0.0;
  EXPECT_EQ(sup_resolvent_bound(op, {1.0}, 1, 1, o).shift, 0.0);
}

TEST(SupResolvent, SignSamplesOnFineLumpedMesh) {
  const WentzellOperator op(make_bundle(64, cplx(-1, 2), MassLumping::lumped));
  SupResolventOptions o;
  o.samples = SupResolventOptions::Samples::signs;
  const auto r = sup_resolvent_bound(op, {50.0}, 20, 9, o);
  EXPECT_LE(r.worst, 1.0 + 5e-3);
  EXPECT_EQ(r.shift, 2.0);
}

TEST(SupResolvent, LambdaSweepTrendsTowardOne) {
  // lambda R(lambda) h -> h, so the ratio approaches 1: from below for the
  // shifted (contractive) operator, from above without the shift when Re beta < 0.
  SupResolventOptions signs;
  signs.samples = SupResolventOptions::Samples::signs;
  SupResolventOptions unshifted = signs;
  unshifted.shift = 0.0;
  for (const auto& [beta, o] : {std::pair{cplx(-1, 2), signs}, {cplx(-3, 0), unshifted}}) {
    const WentzellOperator op(make_bundle(24, beta, MassLumping::lumped));
    const auto r = sup_resolvent_bound(op, {1, 10, 100, 1000}, 20, 10, o);
    for (std::size_t i = 1; i < r.ratio.size(); ++i)
      EXPECT_LE(std::abs(r.ratio[i] - 1), std::abs(r.ratio[i - 1] - 1) + 1e-3);
    EXPECT_NEAR(r.ratio.back(), 1.0, 5e-3);
  }
  const WentzellOperator op(make_bundle(4, 0.0));
  EXPECT_THROW(sup_resolvent_bound(op, {0.0}, 1, 1), InvalidArgument);
}

// ---------------------------------------------------------------- stampacchia

TEST(Stampacchia, ThresholdByHand) {
  EXPECT_DOUBLE_EQ(stampacchia_threshold({1, 1, 2, 1}), 4.0);
  EXPECT_DOUBLE_EQ(stampacchia_threshold({16, 2, 2, 1}), 16.0);
  // c^{1/a} phi0^{(d-1)/a} 2^{d/(d-1)} with c = 8, a = 3, d = 3, phi0 = 4: 2 * 4^{2/3} * 2^{3/2}
  EXPECT_NEAR(stampacchia_threshold({8, 3, 3, 4}), 2.0 * std::cbrt(16.0) * std::pow(2.0, 1.5), 1e-12);
}

TEST(Stampacchia, InvalidInputs) {
  EXPECT_THROW(stampacchia_threshold({1, 1, 1.0, 1}), InvalidArgument);
  EXPECT_THROW(stampacchia_threshold({1, 1, 0.5, 1}), InvalidArgument);
  EXPECT_THROW(stampacchia_threshold({0, 1, 2, 1}), InvalidArgument);
  EXPECT_THROW(stampacchia_threshold({1, -1, 2, 1}), InvalidArgument);
  EXPECT_THROW(stampacchia_threshold({1, 1, 2, -1}), InvalidArgument);
}

TEST(Stampacchia, ScheduleMatchesInduction) {
  const StampacchiaInput in{2, 1.5, 2.5, 3};
  const double t0 = stampacchia_threshold(in);
  const auto s = stampacchia_schedule(in, 10);
  ASSERT_EQ(s.size(), 11u);
  EXPECT_EQ(s[0].k, 0.0);
  EXPECT_EQ(s[0].bound, 3.0);
  for (const auto& l : s) {
    EXPECT_NEAR(l.k, (1 - std::pow(2.0, -l.m)) * t0, 1e-12 * t0);
    EXPECT_NEAR(l.bound, std::pow(2.0, -l.m * 1.5 / 1.5) * 3.0, 1e-12 * 3.0);
  }
}

TEST(Stampacchia, SimulationStaysBelowBoundAndVanishes) {
  const auto sim = simulate_stampacchia({1, 1, 2, 1}, 60);
  EXPECT_TRUE(sim.bound_holds);
  ASSERT_EQ(sim.phi.size(), 61u);
  for (std::size_t m = 0; m < sim.phi.size(); ++m) EXPECT_LE(sim.phi[m], sim.levels[m].bound * (1 + 1e-9));
  EXPECT_LT(sim.phi.back(), 1e-12);
  EXPECT_GE(sim.first_below(1e-12), 0);
}

TEST(Stampacchia, RandomAdmissibleInputsDecay) {
  Rng rng(11);
  std::uniform_real_distribution<double> c(0.1, 10), a(1, 4), d(1.1, 2), p(0.01, 10);
  for (int k = 0; k < 100; ++k) {
    const StampacchiaInput in{c(rng), a(rng), d(rng), p(rng)};
    const auto sim = simulate_stampacchia(in, 60);
    EXPECT_TRUE(sim.bound_holds);
    const int m = sim.first_below(1e-12);
    EXPECT_GE(m, 0);
    EXPECT_LE(m, 60);
  }
}

TEST(Stampacchia, ZeroPhiGivesZeroThreshold) {
  EXPECT_EQ(stampacchia_threshold({1, 1, 2, 0}), 0.0);
  const auto sim = simulate_stampacchia({1, 1, 2, 0}, 5);
  EXPECT_EQ(sim.first_below(1e-300), 0);
}

TEST(Stampacchia, ThresholdMonotoneInCAndPhi0) {
  for (double alpha : {0.5, 1.0, 3.0})
    for (double delta : {1.2, 2.0, 4.0}) {
      double prev_c = 0.0;
      for (double cphi = 0.1; cphi < 100; cphi *= 1.7) {
        double prev_p = 0.0;
        for (double phi0 = 0.0; phi0 < 50; phi0 = phi0 * 1.9 + 0.01) {
          const double t = stampacchia_threshold({cphi, alpha, delta, phi0});
          EXPECT_GE(t, prev_p);
          prev_p = t;
        }
        const double t = stampacchia_threshold({cphi, alpha, delta, 1.0});
        EXPECT_GE(t, prev_c);
        prev_c = t;
      }
    }
}

// ---------------------------------------------------------------- level sets

TEST(LevelSet, DefaultExponents) {
  const auto e = level_set_exponents(4, 4);
  EXPECT_NEAR(e.two_star, 16.0 / 3, 1e-15);
  EXPECT_NEAR(e.s, 16.0 / 3, 1e-15);
  EXPECT_NEAR(e.delta, 3.0, 1e-12);
  EXPECT_THROW(level_set_exponents(1.0, 4), InvalidArgument);
  EXPECT_THROW(level_set_exponents(4, 0.5), InvalidArgument);
  EXPECT_THROW(level_set_exponents(4, 4, 2.0), InvalidArgument);  // 2* must exceed 2p/(p-1) = 8/3
}

TEST(LevelSet, ProfileIsNonincreasingAndVanishesAtSup) {
  const auto b = make_bundle(12, 0.0);
  Rng rng(12);
  const Vector u = random_complex_vector(rng, b->n_total());
  const double U = norm_inf(u);
  const auto e = level_set_exponents(4, 4);
  const auto prof = level_set_profile(*b, u, level_set_grid(U), e);
  ASSERT_EQ(prof.k.size(), 64u);
  EXPECT_EQ(prof.k.front(), 0.0);
  EXPECT_EQ(prof.k.back(), U);
  for (std::size_t i = 1; i < prof.k.size(); ++i) {
    EXPECT_GT(prof.k[i], prof.k[i - 1]);
    EXPECT_LE(prof.omega_measure[i], prof.omega_measure[i - 1]);
    EXPECT_LE(prof.gamma_measure[i], prof.gamma_measure[i - 1]);
    EXPECT_LE(prof.phi[i], prof.phi[i - 1]);
  }
  EXPECT_EQ(prof.phi.back(), 0.0);
  // phi(0) by a direct lumped count.
  double om = 0.0, ga = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) > 0) om += b->interior_weights[i], ga += b->boundary_weights[i];
  EXPECT_NEAR(prof.phi.front(), om + std::pow(ga, e.two_star / e.s), 1e-12);
}

TEST(LinftyCertify, ZeroSolution) {
  const auto b = make_bundle(8, 0.0);
  const Vector z(b->n_total(), 0.0);
  const auto c = linfty_certify(*b, 1.0, z, z, Vector(b->n_boundary(), 0.0), 4, 4);
  EXPECT_EQ(c.t0, 0.0);
  EXPECT_TRUE(c.certified);
  EXPECT_TRUE(c.degenerate);
}

TEST(LinftyCertify, ConstantRobinSolution) {
  const auto b = make_bundle(8, 0.5);
  const Vector f(b->n_total(), 1.0), g(b->n_boundary(), 1.5);
  const auto u = robin_solve(*b, 1.0, f, g);
  const auto c = linfty_certify(*b, 1.0, u.coeffs(), f, g, 4, 4);
  EXPECT_GE(c.t0, 1.0);
  EXPECT_TRUE(c.certified);
  EXPECT_TRUE(c.energy_ok);
  // Step profile: phi vanishes at and beyond the sup norm only.
  EXPECT_GT(c.profile.phi[c.profile.phi.size() - 2], 0.0);
  EXPECT_EQ(c.profile.phi.back(), 0.0);
}

TEST(LinftyCertify, SoundOnRandomData) {
  const auto b = make_bundle(16, cplx(1, 1));
  const double lambda = choose_omega0(b->beta);
  Rng rng(13);
  std::vector<double> overshoot;
  for (int k = 0; k < 6; ++k) {
    const Vector f = random_complex_vector(rng, b->n_total());
    const Vector g = random_complex_vector(rng, b->n_boundary());
    const auto u = robin_solve(*b, lambda, f, g);
    const auto c = linfty_certify(*b, lambda, u.coeffs(), f, g, 4, 4);
    EXPECT_TRUE(c.certified);
    EXPECT_GE(c.t0 * (1 + 1e-9), c.sup_norm);
    EXPECT_TRUE(c.energy_ok) << c.energy_worst;
    EXPECT_TRUE(c.report.passed());
    overshoot.push_back(c.t0 / c.sup_norm);
  }
  for (double o : overshoot) EXPECT_GE(o, 1.0 - 1e-9);
}

TEST(LinftyCertify, InadmissibleExponents) {
  const auto b = make_bundle(4, 0.0);
  const Vector z(b->n_total(), 1.0);
  EXPECT_THROW(linfty_certify(*b, 1.0, z, z, Vector(b->n_boundary(), 1.0), 1.0, 4), InvalidArgument);
}

// ---------------------------------------------------------------- trace constant

TEST(TraceConstant, ConstantFunctionRatio) {
  const auto b = make_bundle(8, 0.0);
  for (double s : {2.0, 3.0, 6.0}) {
    const Vector one = ones(b->n_total());
    EXPECT_NEAR(trace_ls_norm(*b, one, s) / h1_norm(*b, one), std::pow(4.0, 1.0 / s), 1e-12);
    const auto est = trace_constant_estimate(*b, s, 50, 10, 1);
    EXPECT_GE(est.c1, std::pow(4.0, 1.0 / s) * (1 - 1e-12));
  }
  EXPECT_THROW(trace_constant_estimate(*b, 1.5), InvalidArgument);
}

TEST(TraceConstant, MatchesGeneralizedEigenvalueForSEqualsTwo) {
  const auto b = make_bundle(8, 0.0);
  const double lmax =
      oracle::largest_generalized_eigenvalue(dense(b->boundary_mass_consistent), dense(b->h1_gram()));
  const auto est = trace_constant_estimate(*b, 2.0);
  EXPECT_GE(est.c1 * est.c1, 0.99 * lmax);
  EXPECT_LE(est.c1 * est.c1, lmax * (1 + 1e-8));
  EXPECT_EQ(est.maximizer.size(), b->n_total());
  EXPECT_GE(est.c1, est.best_random);
}

TEST(TraceConstant, StabilizesUnderRefinement) {
  std::vector<double> c;
  for (std::size_t n : {16, 32, 64}) c.push_back(trace_constant_estimate(*make_bundle(n, 0.0), 2.0).c1);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LE(std::abs(c[i] - c[i - 1]) / c[i - 1], 0.05);
}

// The shifted form with omega0 = max(1, -inf Re beta, sup |Im beta|) stays inside the
// quarter-plane sector only when Re beta >= 0. With beta = -1 + i the trace maximizer
// leaves it while remaining strictly sectorial.
TEST(SectorAngle, NegativeRealPartCanExceedQuarterPi) {
  const auto b = make_bundle(16, cplx(-1, 1));
  const WentzellOperator op(b);
  const auto est = trace_constant_estimate(*b, 2.0);
  const cplx v = shifted_form_value(op, op.omega0(), est.maximizer);
  EXPECT_GT(v.real(), 0.0);
  EXPECT_GT(std::abs(std::arg(v)), std::numbers::pi / 4);
  EXPECT_LT(std::abs(std::arg(v)), std::numbers::pi / 2);
}

// ---------------------------------------------------------------- density witness

TEST(DensityWitness, ConstantTargetRecoveredExactlyForZeroBeta) {
  const WentzellOperator op(make_bundle(16, 0.0));
  const auto w = density_witness(op, constant_field(2.5), 1e-6, 4, 4);
  EXPECT_LE(w.achieved_error, 1e-10);
  EXPECT_TRUE(w.reached);
}

TEST(DensityWitness, ConstantTargetWithBetaConvergesInR) {
  const auto b = make_bundle(32, cplx(1, 1));
  const WentzellOperator op(b);
  const double lambda = op.omega0();
  const auto solver = LinearSolver(linear_combination(lambda, op.gram(), 1.0, op.form_matrix()));
  double prev = std::numeric_limits<double>::infinity();
  for (double r : {0.4, 0.2, 0.1}) {
    const Vector u = solver.solve(detail::density_load(*b, constant_field(1.0), lambda, r));
    const double err = norm_inf(subtract(u, ones(u.size())));
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(DensityWitness, LooseToleranceSucceedsImmediately) {
  const WentzellOperator op(make_bundle(8, cplx(1, 1)));
  const auto w = density_witness(op, linear_x(), 1e3, 4, 4);
  EXPECT_TRUE(w.reached);
  EXPECT_EQ(w.iterations, 1u);
  EXPECT_EQ(w.r, 0.25);
}

TEST(DensityWitness, LinearTargetOnFineMesh) {
  const WentzellOperator op(make_bundle(64, cplx(1, 1)));
  const auto w = density_witness(op, linear_x(), 0.05, 4, 4);
  EXPECT_TRUE(w.reached) << "floor " << w.floor;
  EXPECT_LE(w.achieved_error, 0.05);
  EXPECT_LE(w.achieved_error, w.certified_bound * (1 + 1e-9));
  EXPECT_LE(w.domain_residual, 1e-6);
  EXPECT_TRUE(w.report.passed());
}

TEST(DensityWitness, UnreachableTargetReportsFloor) {
  const WentzellOperator op(make_bundle(8, cplx(1, 1)));
  const auto w = density_witness(op, linear_x(), 1e-9, 4, 4);
  EXPECT_FALSE(w.reached);
  EXPECT_FALSE(w.report.passed());
  EXPECT_GT(w.certified_bound, 1e-9);
  EXPECT_THROW(density_witness(op, linear_x(), 0.0, 4, 4), InvalidArgument);
}

TEST(DensityWitness, CollarProfile) {
  EXPECT_EQ(detail::collar_profile(0.0), 1.0);
  EXPECT_EQ(detail::collar_profile(0.5), 1.0);
  EXPECT_EQ(detail::collar_profile(1.0), 0.0);
  EXPECT_NEAR(detail::collar_profile(0.75), 0.5, 1e-15);
  for (double s = 0.0; s < 1.2; s += 0.01) {
    EXPECT_GE(detail::collar_profile(s), 0.0);
    EXPECT_LE(detail::collar_profile(s), 1.0);
    EXPECT_LE(detail::collar_profile(s + 0.01), detail::collar_profile(s));
  }
}

// ---------------------------------------------------------------- neumann

TEST(Neumann, AllChecksPassOnStructuredMesh) {
  const auto c = neumann_checks(std::make_shared<const TriMesh>(generate_rectangle(1, 1, 16, 16)));
  EXPECT_TRUE(c.nonobtuse);
  EXPECT_LE(c.constant_defect, 1e-10);
  EXPECT_GE(c.min_resolvent, -1e-12);
  EXPECT_LE(c.sup_ratio, 1.0 + 1e-10);
  EXPECT_TRUE(c.report.passed());
}

TEST(Neumann, ConstantPreservedOnAnyMesh) {
  // Obtuse triangles do not affect S(t)1 = 1.
  const auto m = std::make_shared<const TriMesh>(
      TriMesh::build({{0, 0}, {2, 0}, {1, 0.2}, {1, 1}}, {{0, 1, 2}, {0, 2, 3}, {2, 1, 3}}));
  const auto c = neumann_checks(m);
  EXPECT_FALSE(c.nonobtuse);
  EXPECT_LE(c.constant_defect, 1e-10);
}

TEST(ReportFormat, TextAndJson) {
  Report r("demo");
  r.set("a", 1).set("nested", nlohmann::ordered_json{{"x", 2}}).check("ok", true);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.text(), "report: demo\na: 1\nnested.x: 2\nchecks.ok: pass\n");
  r.check("bad", false);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(nlohmann::json::parse(r.json())["checks"]["bad"], "fail");
}
