#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wentzell/core/sector.hpp"
#include "wentzell/core/stepping.hpp"
#include "wentzell/io/config.hpp"
#include "wentzell/io/export.hpp"
#include "wentzell/io/expression.hpp"
#include "wentzell/mesh/generate.hpp"
#include "wentzell/mesh/mesh_io.hpp"
#include "wentzell/mesh/quality.hpp"
#include "wentzell/verify/density.hpp"
#include "wentzell/verify/neumann.hpp"
#include "wentzell/verify/projection.hpp"
#include "wentzell/verify/trace.hpp"

namespace wentzell::cli {

enum ExitCode : int { kOk = 0, kFinding = 1, kUsage = 2, kNumerical = 3 };

struct Context {
  Config config;
  std::filesystem::path out;
  std::uint64_t seed = 1;
  std::ostream* log = &std::cout;
};

namespace detail {

inline void default_key(Config& c, const std::string& key, const std::string& value) {
  if (!c.has(key)) c.set(key, value);
}

/// Fills every key the command reads, so that output headers carry the full
/// resolved configuration.
inline void resolve_defaults(Config& c, const std::string& command) {
  default_key(c, "domain", "rectangle");
  const std::string domain = c.get("domain", "");
  if (domain == "rectangle") {
    default_key(c, "width", "1");
    default_key(c, "height", "1");
  }
  if (domain != "file") default_key(c, "resolution", "16");
  default_key(c, "lumping", "lumped");
  if (c.with_prefix("beta.").empty()) default_key(c, "beta", "0");
  if (command == "solve") {
    default_key(c, "f", "1");
    default_key(c, "g", "1");
    default_key(c, "refinements", "0");
  } else if (command == "evolve") {
    default_key(c, "scheme", "implicit-euler");
    default_key(c, "dt", "0.01");
    default_key(c, "t_final", "0.1");
    if (!c.has("initial.file")) default_key(c, "initial", "1");
    default_key(c, "frame_every", "0");
  } else if (command == "verify") {
    default_key(c, "suite", "all");
    default_key(c, "samples", "20");
    default_key(c, "lambdas", "1,10,100");
    default_key(c, "trace.s", "2");
    default_key(c, "density.epsilon", "0.05");
    default_key(c, "density.w", "x");
    default_key(c, "density.w.dx", "1");
    default_key(c, "density.w.dy", "0");
    default_key(c, "density.w.lap", "0");
  }
}

inline std::shared_ptr<const TriMesh> build_mesh(const Config& c, long resolution_factor = 1) {
  const std::string domain = c.require("domain");
  if (domain == "file") {
    if (resolution_factor != 1) throw InvalidArgument("refinement is not available for domain = file");
    return std::make_shared<const TriMesh>(read_mesh(c.require("mesh.file")));
  }
  const long n = c.get_int("resolution", 16);
  if (n < 1) throw InvalidArgument("resolution must be >= 1");
  const auto nn = static_cast<std::size_t>(n * resolution_factor);
  if (domain == "rectangle") {
    const double w = c.get_double("width", 1.0), h = c.get_double("height", 1.0);
    if (!(w > 0.0) || !(h > 0.0)) throw InvalidArgument("width and height must be positive");
    const double cells_per_unit = static_cast<double>(nn) / std::min(w, h);
    const auto nx = static_cast<std::size_t>(std::lround(cells_per_unit * w));
    const auto ny = static_cast<std::size_t>(std::lround(cells_per_unit * h));
    return std::make_shared<const TriMesh>(generate_rectangle(w, h, nx, ny));
  }
  if (domain == "lshape") return std::make_shared<const TriMesh>(generate_lshape(nn));
  throw InvalidArgument("unknown domain '" + domain + "' (expected rectangle, lshape or file)");
}

inline MassLumping lumping(const Config& c) {
  const std::string l = c.get("lumping", "lumped");
  if (l == "lumped") return MassLumping::lumped;
  if (l == "consistent") return MassLumping::consistent;
  throw InvalidArgument("unknown lumping '" + l + "' (expected lumped or consistent)");
}

/// `beta.<label> = expr` entries give per-arc constants; otherwise `beta = expr`
/// is sampled at edge midpoints (with the edge normal in nx, ny).
inline BoundaryCoefficient build_beta(const Config& c, const TriMesh& mesh) {
  const auto arcs = c.with_prefix("beta.");
  if (!arcs.empty()) {
    const auto labels = mesh.arc_labels();
    std::map<int, cplx> values;
    for (const auto& [key, expr] : arcs) {
      int label = 0;
      const auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), label);
      if (ec != std::errc() || p != key.data() + key.size())
        throw InvalidArgument("beta.<label>: '" + key + "' is not an integer label");
      if (!labels.count(label)) throw InvalidArgument("beta." + key + ": mesh has no arc with this label");
      values[label] = Expression::parse(expr)(ExprEnv{});
    }
    return BoundaryCoefficient::per_arc(mesh, values);
  }
  const auto e = Expression::parse(c.get("beta", "0"));
  std::vector<cplx> v;
  for (std::size_t k = 0; k < mesh.boundary_edges().size(); ++k) {
    const Point m = mesh.boundary_edge_midpoint(k), n = mesh.boundary_edge_normal(k);
    v.push_back(e(ExprEnv{m.x, m.y, n.x, n.y}));
  }
  return BoundaryCoefficient(std::move(v), "beta = " + e.text());
}

inline std::shared_ptr<const OperatorBundle> build_bundle(const Config& c, long resolution_factor = 1) {
  auto mesh = build_mesh(c, resolution_factor);
  auto beta = build_beta(c, *mesh);
  return std::make_shared<const OperatorBundle>(assemble(mesh, std::move(beta), lumping(c)));
}

inline double omega0(const Config& c, const OperatorBundle& b) {
  const auto o = c.get_optional_double("omega0");
  if (o && !(*o >= 0.0)) throw InvalidArgument("omega0 must be >= 0");
  return o.value_or(choose_omega0(b.beta));
}

inline std::filesystem::path prepare_out(const Context& ctx) {
  std::filesystem::create_directories(ctx.out);
  return ctx.out;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  auto os = wentzell::detail::open_output(path.string());
  os << content;
}

}  // namespace detail

inline int cmd_mesh(Context ctx) {
  detail::resolve_defaults(ctx.config, "mesh");
  const auto mesh = detail::build_mesh(ctx.config);
  const auto q = quality_report(*mesh);
  const auto dir = detail::prepare_out(ctx);
  write_mesh((dir / "mesh.wmesh").string(), *mesh, ctx.config.lines());
  Report r("mesh-quality");
  r.set("mesh", mesh->id()).set("vertices", mesh->num_vertices()).set("triangles", mesh->num_triangles());
  r.set("boundary_edges", mesh->boundary_edges().size()).set("area", mesh->area());
  r.set("perimeter", mesh->perimeter()).set("max_angle", q.max_angle).set("nonobtuse", q.is_nonobtuse);
  r.set("h_max", q.h_max).set("h_min", q.h_min).set("euler_characteristic", mesh->euler_characteristic());
  detail::write_text_file(dir / "quality.txt", ctx.config.header() + r.text());
  *ctx.log << r.text();
  return kOk;
}

namespace detail {

struct SolveResult {
  std::shared_ptr<const OperatorBundle> bundle;
  ProductState u;
  double lambda;
};

inline SolveResult solve_once(const Config& c, long factor) {
  auto b = build_bundle(c, factor);
  const double w0 = omega0(c, *b);
  const double lambda = c.get_double("lambda", w0);
  const auto f = Expression::parse(c.require("f"));
  const auto g = Expression::parse(c.require("g"));
  const Vector fv = interpolate(*b->mesh, [&](Point p) { return f(p); });
  std::vector<std::array<cplx, 2>> gv;
  const auto& mesh = *b->mesh;
  for (std::size_t e = 0; e < mesh.boundary_edges().size(); ++e) {
    const Point n = mesh.boundary_edge_normal(e);
    const Point pa = mesh.vertices()[mesh.boundary_edges()[e].a], pb = mesh.vertices()[mesh.boundary_edges()[e].b];
    gv.push_back({g(ExprEnv{pa.x, pa.y, n.x, n.y}), g(ExprEnv{pb.x, pb.y, n.x, n.y})});
  }
  auto u = robin_solve_edgewise(*b, lambda, fv, gv, w0);
  return {b, std::move(u), lambda};
}

}  // namespace detail

inline int cmd_solve(Context ctx) {
  auto& c = ctx.config;
  detail::resolve_defaults(c, "solve");
  {
    auto probe = detail::build_bundle(c);
    detail::default_key(c, "lambda", detail::fmt(detail::omega0(c, *probe)));
  }
  const auto res = detail::solve_once(c, 1);
  const auto dir = detail::prepare_out(ctx);
  const std::string header = c.header();
  const auto& mesh = *res.bundle->mesh;
  write_snapshot_csv((dir / "solution.csv").string(), mesh, res.u.coeffs(), header);
  write_heatmap((dir / "solution.ppm").string(), mesh, res.u.coeffs(), header);

  Report r("solve");
  r.set("mesh", mesh.id()).set("beta", res.bundle->beta.description()).set("lambda", res.lambda);
  r.set("sup_norm", norm_inf(res.u.coeffs())).set("h1_norm", h1_norm(*res.bundle, res.u.coeffs()));

  const long refinements = c.get_int("refinements", 0);
  if (c.has("exact")) {
    const auto exact = Expression::parse(c.require("exact"));
    const bool has_grad = c.has("exact.dx") && c.has("exact.dy");
    const auto dx = Expression::parse(c.get("exact.dx", "0"));
    const auto dy = Expression::parse(c.get("exact.dy", "0"));
    std::ostringstream table;
    table << header << "n,h,l2_error,h1_error,l2_order,h1_order\n";
    double prev_l2 = 0.0, prev_h1 = 0.0;
    for (long k = 0; k <= refinements; ++k) {
      const auto rk = k == 0 ? res : detail::solve_once(c, 1L << k);
      const auto& mk = *rk.bundle->mesh;
      const double l2 = l2_error(mk, rk.u.coeffs(), [&](Point p) { return exact(p); });
      const double h1 = has_grad ? h1_seminorm_error(mk, rk.u.coeffs(), [&](Point p) {
        return std::array<cplx, 2>{dx(p), dy(p)};
      })
                                 : std::nan("");
      const double l2o = k == 0 ? std::nan("") : std::log2(prev_l2 / l2);
      const double h1o = k == 0 ? std::nan("") : std::log2(prev_h1 / h1);
      table << c.get_int("resolution", 0) * (1L << k) << ',' << detail::fmt(quality_report(mk).h_max) << ','
            << detail::fmt(l2) << ',' << detail::fmt(h1) << ',' << detail::fmt(l2o) << ',' << detail::fmt(h1o)
            << '\n';
      prev_l2 = l2;
      prev_h1 = h1;
      if (k == 0) r.set("l2_error", l2).set("h1_error", h1);
      if (k == refinements && k > 0) r.set("l2_order", l2o).set("h1_order", h1o);
    }
    detail::write_text_file(dir / "convergence.csv", table.str());
  }
  detail::write_text_file(dir / "report.txt", header + r.text());
  *ctx.log << r.text();
  return kOk;
}

inline int cmd_evolve(Context ctx) {
  auto& c = ctx.config;
  detail::resolve_defaults(c, "evolve");
  const auto b = detail::build_bundle(c);
  const WentzellOperator op(b);
  const Scheme scheme = parse_scheme(c.require("scheme"));
  const double dt = c.get_double("dt", 0.01);
  const double t_final = c.get_double("t_final", 0.1);
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (!(t_final >= 0.0)) throw InvalidArgument("t_final must be >= 0");
  const long frame_every = c.get_int("frame_every", 0);
  if (frame_every < 0) throw InvalidArgument("frame_every must be >= 0");

  Vector u0;
  if (c.has("initial.file")) {
    std::ifstream is(c.require("initial.file"));
    if (!is) throw InvalidArgument("cannot open initial.file '" + c.require("initial.file") + "'");
    u0 = read_snapshot_csv(is, b->n_total());
  } else {
    const auto e = Expression::parse(c.require("initial"));
    u0 = interpolate(*b->mesh, [&](Point p) { return e(p); });
  }

  const auto dir = detail::prepare_out(ctx);
  const std::string header = c.header();
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_final / dt * (1.0 - 1e-12)));
  std::size_t step = 0;
  auto frame = [&](std::size_t k, std::span<const cplx> u) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.ppm", k);
    write_heatmap((dir / name).string(), *b->mesh, u, header);
  };
  ProductState final_state = op.state(u0);
  EvolveOptions opt;
  opt.observer = [&](const Observation&, const ProductState& s) {
    if (step == 0 || step == n_steps || (frame_every > 0 && step % static_cast<std::size_t>(frame_every) == 0))
      frame(step, s.coeffs());
    final_state = s;
    ++step;
  };
  const auto tr = evolve(op, op.state(u0), t_final, dt, scheme, opt);
  write_trajectory_csv((dir / "trajectory.csv").string(), tr, header);
  write_snapshot_csv((dir / "final.csv").string(), *b->mesh, final_state.coeffs(), header);

  Report r("evolve");
  r.set("mesh", b->mesh->id()).set("beta", b->beta.description()).set("scheme", to_string(scheme));
  r.set("steps", tr.observations.size() - 1).set("aborted", tr.aborted);
  const auto& first = tr.observations.front();
  const auto& lastobs = tr.observations.back();
  r.set("mass_drift", std::abs(lastobs.mass - first.mass) / std::max(std::abs(first.mass), 1e-300));
  r.set("final_sup_norm", lastobs.sup_norm).set("final_h1_norm", lastobs.h1_norm);
  detail::write_text_file(dir / "report.txt", header + r.text());
  *ctx.log << r.text();
  if (tr.aborted) {
    *ctx.log << "error: " << tr.abort_reason << "\n";
    return kNumerical;
  }
  return kOk;
}

namespace detail {

struct SuiteOutcome {
  std::string name;
  std::string status;  // pass, fail, not-applicable
  Report report;
};

inline SuiteOutcome gated(const std::string& name, Report r, bool applicable) {
  if (!applicable) return {name, "not-applicable", std::move(r)};
  const bool ok = r.passed();
  return {name, ok ? "pass" : "fail", std::move(r)};
}

inline std::vector<SuiteOutcome> run_suite(const std::string& suite, const Config& c, std::uint64_t seed) {
  static const std::vector<std::string> all = {"neumann",     "contractivity", "invariance",
                                               "projection",  "sector",        "stampacchia",
                                               "certify",     "trace",         "density"};
  if (suite == "all") {
    std::vector<SuiteOutcome> out;
    for (const auto& s : all) {
      auto r = run_suite(s, c, seed);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }
  if (std::find(all.begin(), all.end(), suite) == all.end())
    throw InvalidArgument("unknown suite '" + suite + "'");

  const auto samples = static_cast<std::size_t>(c.get_int("samples", 20));
  const auto lambdas = c.get_list("lambdas", {1.0, 10.0, 100.0});
  if (suite == "stampacchia") {
    Report r("stampacchia");
    r.set("seed", seed);
    const double t1 = stampacchia_threshold({1.0, 1.0, 2.0, 1.0});
    const double t2 = stampacchia_threshold({16.0, 2.0, 2.0, 1.0});
    r.set("t0_c1_a1_d2_phi1", t1).set("t0_c16_a2_d2_phi1", t2);
    r.check("hand_values", std::abs(t1 - 4.0) <= 1e-12 && std::abs(t2 - 16.0) <= 1e-12);
    Rng rng(seed);
    std::uniform_real_distribution<double> uc(0.1, 10.0), ua(1.0, 4.0), ud(1.1, 2.0), up(0.01, 10.0);
    bool decay = true, bound = true;
    for (std::size_t k = 0; k < 100; ++k) {
      StampacchiaInput in{uc(rng), ua(rng), ud(rng), up(rng)};
      const auto sim = simulate_stampacchia(in, 60);
      bound = bound && sim.bound_holds;
      const int m = sim.first_below(1e-12);
      decay = decay && m >= 0 && m <= 60;
    }
    r.check("bound_holds", bound).check("decay_within_60_steps", decay);
    return {gated("stampacchia", std::move(r), true)};
  }

  if (suite == "neumann") {
    NeumannOptions o;
    o.seed = seed;
    o.n_samples = samples;
    auto res = neumann_checks(build_mesh(c), o);
    return {gated("neumann", std::move(res.report), true)};
  }

  const auto b = build_bundle(c);
  const WentzellOperator op(b);
  const double w0 = omega0(c, *b);
  const bool dmp = quality_report(*b->mesh).is_nonobtuse && b->lumped();

  if (suite == "contractivity") {
    SupResolventOptions o;
    o.shift = w0;
    auto res = sup_resolvent_bound(op, lambdas, samples, seed, o);
    res.report.set("defect", std::max(0.0, res.worst - 1.0)).set("maximum_principle_mesh", dmp);
    return {gated("contractivity", std::move(res.report), dmp)};
  }
  if (suite == "invariance") {
    auto res = invariance_harness(op.shifted(w0), ConvexProjection::unit_ball(), lambdas, samples, seed);
    res.report.set("maximum_principle_mesh", dmp);
    return {gated("invariance", std::move(res.report), dmp)};
  }
  if (suite == "projection") {
    Rng rng(seed);
    Report r("projection-inequality");
    r.context(*b, seed).set("samples", samples).set("maximum_principle_mesh", dmp);
    double worst_k = 0.0, worst_form = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < samples; ++k) {
      const Vector u = scaled(3.0, random_complex_vector(rng, b->n_total()));
      auto p = check_projection_inequality(*b, u);
      worst_k = std::min(worst_k, p.stiffness_term / std::max(p.scale, 1e-300));
      worst_form = std::min(worst_form, p.form_term / std::max(p.scale, 1e-300));
      ok = ok && p.report.passed();
    }
    r.set("min_stiffness_term_rel", worst_k).set("min_form_term_rel", worst_form).check("nonnegative", ok);
    return {gated("projection", std::move(r), dmp)};
  }
  if (suite == "sector") {
    Report r("sector");
    r.context(*b, seed).set("omega", w0);
    try {
      const auto est = sector_estimate(op, w0, std::max<std::size_t>(samples, 1), seed);
      r.set("theta", est.theta).set("samples", est.samples);
      r.set("within_quarter_pi", est.theta <= std::numbers::pi / 4 + 1e-9);
      r.check("sectorial", est.theta < std::numbers::pi / 2);
    } catch (const SectorViolation& e) {
      r.set("violation", e.what()).check("sectorial", false);
    }
    return {gated("sector", std::move(r), true)};
  }
  if (suite == "certify") {
    Rng rng(seed);
    Report r("certify");
    r.context(*b, seed).set("lambda", w0).set("instances", samples);
    bool sound = true, energy = true;
    std::vector<double> overshoot;
    for (std::size_t k = 0; k < samples; ++k) {
      const Vector f = random_complex_vector(rng, b->n_total());
      const Vector g = random_complex_vector(rng, b->n_boundary());
      const auto u = robin_solve(*b, w0, f, g, w0);
      const auto cert = linfty_certify(*b, w0, u.coeffs(), f, g, 4.0, 4.0);
      sound = sound && cert.certified;
      energy = energy && cert.energy_ok;
      if (cert.sup_norm > 0.0) overshoot.push_back(cert.t0 / cert.sup_norm);
    }
    std::sort(overshoot.begin(), overshoot.end());
    if (!overshoot.empty()) r.set("median_overshoot", overshoot[overshoot.size() / 2]);
    r.check("sound", sound).check("energy_inequality", energy);
    return {gated("certify", std::move(r), true)};
  }
  if (suite == "trace") {
    auto est = trace_constant_estimate(*b, c.get_double("trace.s", 2.0), 500, 50, seed);
    return {gated("trace", std::move(est.report), true)};
  }
  // density
  const auto w = Expression::parse(c.get("density.w", "x"));
  const auto wx = Expression::parse(c.get("density.w.dx", "1"));
  const auto wy = Expression::parse(c.get("density.w.dy", "0"));
  const auto wl = Expression::parse(c.get("density.w.lap", "0"));
  SmoothField field{[&](Point p) { return w(p); }, [&](Point p) { return std::array<cplx, 2>{wx(p), wy(p)}; },
                    [&](Point p) { return wl(p); }};
  DensityOptions o;
  o.lambda = std::max(w0, op.omega0());
  auto res = density_witness(op, field, c.get_double("density.epsilon", 0.05), 4.0, 4.0, o);
  res.report.set("w", w.text());
  res.report.check("domain_relation", res.domain_residual <= 1e-6);
  return {gated("density", std::move(res.report), true)};
}

}  // namespace detail

inline int cmd_verify(Context ctx, const std::string& suite_arg) {
  auto& c = ctx.config;
  if (!suite_arg.empty()) c.set("suite", suite_arg);
  detail::resolve_defaults(c, "verify");
  const auto outcomes = detail::run_suite(c.require("suite"), c, ctx.seed);
  const auto dir = detail::prepare_out(ctx);

  std::string text = c.header();
  nlohmann::ordered_json json;
  json["config"] = c.values();
  bool failed = false;
  for (const auto& o : outcomes) {
    text += "[" + o.name + "] " + o.status + "\n" + o.report.text();
    json["suites"][o.name] = {{"status", o.status}, {"report", o.report.data()}};
    *ctx.log << o.name << ": " << o.status << "\n";
    failed = failed || o.status == "fail";
  }
  detail::write_text_file(dir / "verify_report.txt", text);
  detail::write_text_file(dir / "verify_report.json", json.dump(2) + "\n");
  return failed ? kFinding : kOk;
}

/// Entry point shared by the `wentzell` tool and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"P1 finite-element lab for the Laplacian with Wentzell boundary conditions", "wentzell"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir = ".", suite;
  std::vector<std::string> sets;
  std::uint64_t seed = 1;
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--set", sets, "override one key (key=value), repeatable")
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  auto* mesh = app.add_subcommand("mesh", "generate or read a mesh and report its quality");
  auto* solve = app.add_subcommand("solve", "solve the Robin problem");
  auto* evolve = app.add_subcommand("evolve", "run the Wentzell heat flow");
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("suite", suite, "neumann, contractivity, invariance, projection, sector, stampacchia, "
                                     "certify, trace, density or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Context ctx;
    if (!config_path.empty()) ctx.config = Config::load(config_path);
    for (const auto& s : sets) ctx.config.assign(s);
    if (ctx.config.has("seed") && app.count("--seed") == 0)
      seed = static_cast<std::uint64_t>(ctx.config.get_int("seed", 1));
    if (ctx.config.has("out") && app.count("--out") == 0) out_dir = ctx.config.get("out", ".");
    ctx.config.set("seed", std::to_string(seed));
    ctx.config.set("out", out_dir);
    ctx.seed = seed;
    ctx.out = out_dir;
    ctx.log = &out;
    if (mesh->parsed()) return cmd_mesh(std::move(ctx));
    if (solve->parsed()) return cmd_solve(std::move(ctx));
    if (evolve->parsed()) return cmd_evolve(std::move(ctx));
    return cmd_verify(std::move(ctx), suite);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace wentzell::cli
