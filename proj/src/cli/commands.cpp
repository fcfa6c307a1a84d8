#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hardy/cli.hpp"
#include "hardy/errors.hpp"
#include "hardy/exterior.hpp"
#include "hardy/functional.hpp"
#include "hardy/mesh.hpp"
#include "hardy/oracles.hpp"
#include "hardy/report.hpp"
#include "hardy/weights.hpp"

namespace hardy::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = fs::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
  if (!f) throw ConfigError("failed writing " + path.string());
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
  write_file(dir, name, j.dump(2) + "\n");
}

/// Distance from x to the Dirichlet part of the boundary.
double distance_to_gamma(const Domain& dom, const BoundaryPartition& part, const Point& x) {
  double d = kInfinity;
  for (int piece = 0; piece < part.size(); ++piece) {
    if (!part.condition(piece).is_dirichlet()) continue;
    if (const auto* iv = dom.as<Interval>()) {
      d = std::min(d, std::abs(x[0] - (piece == 0 ? iv->a : iv->b)));
    } else if (const auto* poly = dom.as<ConvexPolygon>()) {
      d = std::min(d, edge_segment_distance(*poly, piece, Vec2{x[0], x[1]}));
    } else if (const auto* ball = dom.as<Ball>()) {
      d = std::min(d, ball->radius - x[0]);
    } else {
      d = std::min(d, x[0] - std::get<ExteriorBall>(dom.shape()).radius);
    }
  }
  return d;
}

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t k) {
  // splitmix64 step, so neighbouring cases get unrelated streams
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

json real(double v) { return std::isfinite(v) ? json(v) : json(fmt_real(v)); }

struct CaseOutcome {
  bool ok = true;
  std::string error;
  json detail;
};

/// Run `n` independent cases, in parallel unless sequential; outcomes keep case order.
template <class F>
std::vector<CaseOutcome> run_cases(int n, bool sequential, F f) {
  std::vector<CaseOutcome> out(n);
#pragma omp parallel for schedule(dynamic) if (!sequential)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = f(i);
    } catch (const std::exception& e) {
      out[i].ok = false;
      out[i].error = e.what();
    }
  }
  return out;
}

}  // namespace

ExitCode cmd_estimate(const RunConfig& c, const std::string& out_dir, std::ostream& log) {
  const auto space = default_space(*c.domain, *c.partition, c.p, c.mesh);
  const QuotientReport rep = minimize_quotient(space, *c.partition, c.p, c.solver);

  json j = report_envelope("estimate", c.raw, c.seed);
  j["mesh"] = to_json(space->summary());
  j["p"] = c.p;
  j["result"] = to_json(rep);
  if (c.hooks.scale_weight != 1.0) j["test_hooks"] = {{"scale_weight", c.hooks.scale_weight}};
  write_json(out_dir, "report.json", j);
  write_file(out_dir, "history.csv", history_csv(rep.history));

  log << "lambda_estimate " << fmt_real(rep.lambda_estimate) << " (upper bound, " << rep.iterations
      << " iterations)\n";
  if (rep.analytic_lower) log << "analytic_lower " << fmt_real(*rep.analytic_lower) << " [" << rep.lower_source << "]\n";
  if (!rep.converged) log << "warning: solver stopped without convergence (" << rep.stop_reason << ")\n";
  if (rep.violation) {
    log << "violation: estimate below the analytic lower bound\n";
    return ExitCode::violation;
  }
  return ExitCode::ok;
}

ExitCode cmd_verify(const RunConfig& c, const std::string& out_dir, std::ostream& log) {
  const auto& v = c.verify;
  const bool neg = c.hooks.negate_inequality;
  const bool sequential = c.solver.exec == Exec::serial;
  const std::uint64_t seed = c.seed;
  auto holds = [neg](double big, double small, double slack) {
    return neg ? small >= big + slack : big >= small - slack;
  };

  // Lemma suite: one case per (profile, exponent).
  const int np = static_cast<int>(v.exponents.size());
  auto lemma = run_cases(v.profiles * np, sequential, [&](int k) {
    const int i = k / np;
    const double p = v.exponents[k % np];
    std::mt19937_64 rng(case_seed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Profile1D prof;
    const int count = 2 + static_cast<int>(unit(rng) * 19.0);
    double t = 0.0;
    for (int b = 0; b < count; ++b) {
      prof.breakpoints.push_back(t);
      prof.values.push_back(2.0 * unit(rng) - 1.0);
      t += 0.05 + unit(rng);
    }
    const bool dirichlet = unit(rng) < 0.125;
    const double sigma = dirichlet ? kInfinity : v.sigma_max * unit(rng);
    if (dirichlet) prof.values.front() = 0.0;
    const Sides s = lemma1_sides(prof, sigma, p);
    CaseOutcome o;
    o.ok = holds(s.lhs, s.rhs, v.lemma_tolerance * std::max(1.0, s.lhs));
    if (!o.ok)
      o.detail = {{"case", i}, {"p", p}, {"sigma", real(sigma)}, {"breakpoints", prof.breakpoints},
                  {"values", prof.values}, {"lhs", s.lhs}, {"rhs", s.rhs}};
    return o;
  });

  // Field suite on the unit square: one case per (field, partition class, exponent).
  const Domain square = Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto space = Space::triangles(square, build_polygon_mesh(*square.as<ConvexPolygon>(), v.mesh_h, {}, 0.0));
  const std::vector<std::pair<std::string, BoundaryPartition>> classes{
      {"dirichlet", BoundaryPartition::uniform(square, BoundaryCondition::dirichlet())},
      {"robin", BoundaryPartition::uniform(square, BoundaryCondition::robin(1.0))},
      {"mixed", BoundaryPartition(square, {BoundaryCondition::dirichlet(), BoundaryCondition::robin(1.0),
                                           BoundaryCondition::robin(1.0), BoundaryCondition::robin(1.0)})}};
  std::vector<HardyWeight> weights;
  for (const auto& [name, part] : classes)
    for (double p : v.exponents) weights.push_back(build_weight(*space, part, p));
  const int per_field = static_cast<int>(classes.size()) * np;
  const double rin = inradius(square);
  auto fields = run_cases(v.fields * per_field, sequential, [&](int k) {
    const int i = k / per_field;
    const int ci = (k % per_field) / np;
    const double p = v.exponents[k % np];
    const auto& part = classes[ci].second;
    std::mt19937_64 rng(case_seed(seed ^ 0x5f3759dfULL, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Field f = make_field(space, part);
    for (auto& x : f.values) x = unit(rng);
    f.enforce_pins();
    const double q = dirichlet_energy_p(f, p, Exec::serial) + boundary_energy(f, part, p);
    const double rhs = hardy_rhs_full(f, weights[ci * np + (k % np)], p, rin);
    CaseOutcome o;
    o.ok = holds(q, rhs, v.field_tolerance * std::max(1.0, q));
    if (!o.ok)
      o.detail = {{"case", i}, {"partition", classes[ci].first}, {"p", p}, {"q", q}, {"rhs", rhs},
                  {"values", f.values}};
    return o;
  });

  int errors = 0;
  json failures = json::array();
  auto collect = [&](const std::vector<CaseOutcome>& cases, const char* suite) {
    int failed = 0;
    for (const auto& o : cases) {
      if (o.ok) continue;
      ++failed;
      json f = o.detail.is_null() ? json::object() : o.detail;
      f["suite"] = suite;
      if (!o.error.empty()) {
        f["error"] = o.error;
        ++errors;
      }
      failures.push_back(f);
    }
    return json{{"cases", cases.size()}, {"failed", failed}};
  };

  json j = report_envelope("verify", c.raw, c.seed);
  j["mesh"] = to_json(space->summary());
  j["suites"] = {{"lemma_profiles", collect(lemma, "lemma_profiles")},
                 {"hardy_fields", collect(fields, "hardy_fields")}};
  j["tolerances"] = {{"lemma", v.lemma_tolerance}, {"fields", v.field_tolerance}};
  j["negated"] = neg;
  j["failures"] = failures;
  j["passed"] = failures.empty();
  write_json(out_dir, "verify.json", j);

  log << "lemma cases " << lemma.size() << ", field cases " << fields.size() << ", failures " << failures.size()
      << " (seed " << c.seed << ")\n";
  if (errors > 0) return ExitCode::usage;
  return failures.empty() ? ExitCode::ok : ExitCode::violation;
}

ExitCode cmd_sweep_sigma(const RunConfig& c, const std::string& out_dir, std::ostream& log) {
  const SigmaProbe probe = sigma_limit_probe(*c.domain, c.p, c.sweep.sigmas, c.mesh, c.solver);
  bool violation = false;
  json rows = json::array();
  for (const auto& r : probe.rows) {
    const auto part = BoundaryPartition::uniform(*c.domain, BoundaryCondition::robin(r.sigma));
    const bool below = r.lambda < r.theorem2 - 1e-6;
    violation = violation || below;
    rows.push_back({{"sigma", r.sigma}, {"lambda", r.lambda}, {"theorem2_bound", r.theorem2},
                    {"converged", r.converged}, {"violation", below},
                    {"mesh", to_json(default_space(*c.domain, part, c.p, c.mesh)->summary())}});
  }
  json j = report_envelope("sweep-sigma", c.raw, c.seed);
  j["mesh"] = rows.front()["mesh"];
  j["p"] = c.p;
  j["rows"] = rows;
  j["observed_strictly_decreasing"] = probe.strictly_decreasing;
  j["notes"] = {"monotonicity in sigma is an observation over this grid, not an asserted property"};
  write_json(out_dir, "report.json", j);
  write_file(out_dir, "sweep.csv", sweep_csv(probe));
  log << probe.rows.size() << " sigma values; observed strictly decreasing: "
      << (probe.strictly_decreasing ? "yes" : "no") << "\n";
  return violation ? ExitCode::violation : ExitCode::ok;
}

ExitCode cmd_exterior(const RunConfig& c, const std::string& out_dir, std::ostream& log) {
  const auto& e = c.exterior;
  struct Item {
    double sigma;
    bool branch;
  };
  std::vector<Item> items;
  for (double s : e.sigmas) items.push_back({s, false});
  if (e.branch_row && e.p > e.n) items.push_back({exterior_branch_sigma(e.n, e.p, e.R), true});
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.sigma < b.sigma; });

  std::vector<ExteriorRow> rows;
  json jrows = json::array();
  bool violation = false;
  MeshSummary summary;
  for (const auto& it : items) {
    ExteriorProblem prob{e.n, e.p, e.R, it.sigma, e.rho_max};
    const RadialLogMesh mesh = build_radial_mesh(*prob.domain().as<ExteriorBall>(), e.nodes - 1);
    const QuotientReport rep = brute_force_radial_min(prob, mesh, c.solver);
    ExteriorRow r{e.n, e.p, it.sigma, e.R, e.rho_max, rep.lambda_estimate, rep.analytic_lower.value_or(0.0),
                  it.branch};
    violation = violation || rep.violation;
    summary = rep.mesh;
    rows.push_back(r);
    jrows.push_back({{"sigma", it.sigma}, {"branch_switch", it.branch}, {"estimate", rep.lambda_estimate},
                     {"certificate", r.certificate},
                     {"certificate_source", rep.analytic_lower ? rep.lower_source : "none (trivial bound 0)"},
                     {"gap", r.estimate - r.certificate}, {"converged", rep.converged},
                     {"violation", rep.violation}});
  }
  json j = report_envelope("exterior", c.raw, c.seed);
  j["mesh"] = to_json(summary);
  j["rows"] = jrows;
  j["notes"] = {"radial infima are upper bounds on the full infimum; the gap to the constant is reported, "
                "not interpreted"};
  write_json(out_dir, "report.json", j);
  write_file(out_dir, "exterior.csv", exterior_csv(rows));
  log << rows.size() << " exterior rows written\n";
  return violation ? ExitCode::violation : ExitCode::ok;
}

ExitCode cmd_concentrate(const RunConfig& c, const std::string& out_dir, std::ostream& log) {
  const auto levels = minimizing_sequence(*c.domain, *c.partition, c.p, c.concentrate.levels, c.mesh, c.solver);
  const double far_d = c.concentrate.far_distance;
  std::vector<ConcentrateRow> rows;
  json jl = json::array();
  bool violation = false;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    const double far = local_gradient_energy(
        l.field, [&](const Point& x) { return distance_to_gamma(*c.domain, *c.partition, x) >= far_d; }, c.p);
    rows.push_back({static_cast<int>(i), l.quotient, l.report.terms.energy - far, far});
    violation = violation || l.report.violation;
    jl.push_back({{"level", i}, {"quotient", l.quotient}, {"norm", l.report.terms.norm},
                  {"near_energy", l.report.terms.energy - far},
                  {"far_energy", far},
                  {"converged", l.report.converged}, {"mesh", to_json(l.report.mesh)}});
  }
  json j = report_envelope("concentrate", c.raw, c.seed);
  j["mesh"] = to_json(levels.back().report.mesh);
  j["p"] = c.p;
  j["far_distance"] = far_d;
  j["levels"] = jl;
  write_json(out_dir, "report.json", j);
  write_file(out_dir, "concentrate.csv", concentrate_csv(rows));
  log << levels.size() << " levels; final quotient " << fmt_real(levels.back().quotient) << "\n";
  return violation ? ExitCode::violation : ExitCode::ok;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp Hardy constants for p-Laplacians with Robin, Dirichlet and mixed boundary conditions"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  struct Flags {
    std::string config, out = ".";
    std::uint64_t seed = 0;
    bool sequential = false;
    double tol = 0.0;
    int max_iter = 0;
  } flags;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"estimate", "minimise the Rayleigh quotient and certify it"},
      {"verify", "fuzz the inequality suites"},
      {"sweep-sigma", "solve over a grid of Robin coefficients"},
      {"exterior", "radial brute force on the exterior of a ball"},
      {"concentrate", "nested minimizing sequence and energy concentration"}};
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opt, tol_opt, iter_opt;
  for (const auto& [name, help] : commands) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--config", flags.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    s->add_option("--out", flags.out, "output directory");
    seed_opt.push_back(s->add_option("--seed", flags.seed, "random seed (overrides the config)"));
    s->add_flag("--sequential", flags.sequential, "serial reductions (bitwise reproducible)");
    tol_opt.push_back(s->add_option("--tol", flags.tol, "solver relative tolerance / fuzz tolerance"));
    iter_opt.push_back(s->add_option("--max-iter", flags.max_iter, "solver iteration cap"));
    subs.push_back(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  std::size_t k = 0;
  while (k < subs.size() && !subs[k]->parsed()) ++k;
  const std::string command = commands[k].first;
  Overrides o;
  if (seed_opt[k]->count()) o.seed = flags.seed;
  if (tol_opt[k]->count()) o.tol = flags.tol;
  if (iter_opt[k]->count()) o.max_iter = flags.max_iter;
  o.sequential = flags.sequential;

  try {
    std::ifstream in(flags.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const RunConfig c = parse_config(command, j, o);
    ExitCode code = ExitCode::ok;
    if (command == "estimate") code = cmd_estimate(c, flags.out, out);
    else if (command == "verify") code = cmd_verify(c, flags.out, out);
    else if (command == "sweep-sigma") code = cmd_sweep_sigma(c, flags.out, out);
    else if (command == "exterior") code = cmd_exterior(c, flags.out, out);
    else code = cmd_concentrate(c, flags.out, out);
    return static_cast<int>(code);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return static_cast<int>(ExitCode::usage);
}

}  // namespace hardy::cli
