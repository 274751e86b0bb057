#pragma once

#include <cstdint>

#include "wentzell/core/stepping.hpp"
#include "wentzell/mesh/quality.hpp"
#include "wentzell/verify/projection.hpp"

namespace wentzell {

struct NeumannOptions {
  double dt = 0.01;
  double lambda = 1.0;
  std::size_t n_samples = 20;
  std::size_t n_indicators = 20;
  std::uint64_t seed = 1;
};

struct NeumannChecks {
  double constant_defect = 0.0;   // max |S(dt) 1 - 1|
  double min_resolvent = 0.0;     // min Re over resolvents of node indicators
  double max_imag = 0.0;          // max |Im| of the same
  double sup_ratio = 0.0;         // sup-norm resolvent ratio
  bool nonobtuse = false;
  Report report;
};

/// Neumann Laplacian on L2(Omega) (lumped mass, no boundary terms):
/// (i) S(dt) 1 = 1, (ii) positivity of resolvents of nonnegative data,
/// (iii) L-infinity contractivity of lambda R(lambda).
inline NeumannChecks neumann_checks(std::shared_ptr<const TriMesh> mesh, const NeumannOptions& opt = {}) {
  auto bundle = std::make_shared<const OperatorBundle>(
      assemble(mesh, BoundaryCoefficient::constant(*mesh, 0.0), MassLumping::lumped));
  const auto op = WentzellOperator::neumann(bundle);
  NeumannChecks c;
  c.nonobtuse = quality_report(*mesh).is_nonobtuse;

  const Vector one = ones(op.size());
  c.constant_defect = norm_inf(subtract(ImplicitEulerStepper(op, opt.dt).step(one), one));

  const Resolvent res(op, opt.lambda);
  Rng rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, op.size() - 1);
  c.min_resolvent = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < opt.n_indicators; ++k) {
    Vector h(op.size(), 0.0);
    h[k == 0 ? 0 : pick(rng)] = 1.0;
    for (cplx z : res.apply(h)) {
      c.min_resolvent = std::min(c.min_resolvent, z.real());
      c.max_imag = std::max(c.max_imag, std::abs(z.imag()));
    }
  }

  SupResolventOptions sopt;
  sopt.tol = 1e-10;
  c.sup_ratio = sup_resolvent_bound(op, {opt.lambda}, opt.n_samples, opt.seed, sopt).worst;

  c.report = Report("neumann");
  c.report.context(*bundle, opt.seed).set("nonobtuse", c.nonobtuse).set("dt", opt.dt).set("lambda", opt.lambda);
  c.report.set("constant_defect", c.constant_defect).set("min_resolvent", c.min_resolvent);
  c.report.set("sup_ratio", c.sup_ratio);
  c.report.check("constant_preserved", c.constant_defect <= 1e-10);
  c.report.check("positivity", c.min_resolvent >= -1e-12 && c.max_imag <= 1e-12);
  c.report.check("linfty_contractive", c.sup_ratio <= 1.0 + 1e-10);
  return c;
}

}  // namespace wentzell
