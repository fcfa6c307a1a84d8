#include <algorithm>
#include <cmath>
#include <set>

#include "hardy/cli.hpp"
#include "hardy/errors.hpp"

namespace hardy::cli {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

double number(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

long long integer_or(const json& j, const std::string& key, long long fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long long>();
}

bool bool_or(const json& j, const std::string& key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + ": expected true or false");
  return j.at(key).get<bool>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(where + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void require(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
}

Domain parse_domain(const json& j) {
  const std::string w = "domain";
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("domain: expected an object with a string 'kind'");
  const std::string kind = j.at("kind");
  if (kind == "interval") {
    check_keys(j, {"kind", "a", "b"}, w);
    return Domain::interval(number_or(j, "a", 0.0, w), number_or(j, "b", 1.0, w));
  }
  if (kind == "polygon") {
    check_keys(j, {"kind", "vertices"}, w);
    require(j, "vertices", w);
    std::vector<Vec2> vs;
    for (const auto& v : j.at("vertices")) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError("domain.vertices: expected [x, y] pairs");
      vs.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return Domain::polygon(std::move(vs));
  }
  if (kind == "ball") {
    check_keys(j, {"kind", "dim", "radius"}, w);
    return Domain::ball(static_cast<int>(integer_or(j, "dim", 2, w)), number_or(j, "radius", 1.0, w));
  }
  if (kind == "exterior_ball") {
    check_keys(j, {"kind", "dim", "radius", "rho_max"}, w);
    require(j, "rho_max", w);
    return Domain::exterior_ball(static_cast<int>(integer_or(j, "dim", 2, w)), number_or(j, "radius", 1.0, w),
                                 number(j, "rho_max", w));
  }
  throw ConfigError("domain.kind: expected interval, polygon, ball or exterior_ball");
}

BoundaryCondition parse_condition(const json& v, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() == "dirichlet") return BoundaryCondition::dirichlet();
    throw ConfigError(where + ": expected \"dirichlet\" or a Robin coefficient");
  }
  if (!v.is_number()) throw ConfigError(where + ": expected \"dirichlet\" or a Robin coefficient");
  return BoundaryCondition::robin(v.get<double>());
}

/// "dirichlet" | sigma | [per-piece conditions].
BoundaryPartition parse_uniform_or_list(const Domain& dom, const json& j) {
  const int n = dom.piece_count();
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != n)
      throw ConfigError("boundary: expected " + std::to_string(n) + " piece conditions");
    std::vector<BoundaryCondition> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(parse_condition(j[i], "boundary[" + std::to_string(i) + "]"));
    return BoundaryPartition(dom, std::move(c));
  }
  return BoundaryPartition::uniform(dom, parse_condition(j, "boundary"));
}

/// As above, or {"default": c, "pieces": {"<piece id>": c}}.
BoundaryPartition parse_partition(const Domain& dom, const json& j) {
  if (!j.is_object()) return parse_uniform_or_list(dom, j);
  check_keys(j, {"default", "pieces"}, "boundary");
  require(j, "default", "boundary");
  const int n = dom.piece_count();
  std::vector<BoundaryCondition> c(n, parse_condition(j.at("default"), "boundary.default"));
  if (!j.contains("pieces")) return BoundaryPartition(dom, std::move(c));
  const auto& pieces = j.at("pieces");
  if (!pieces.is_object()) throw ConfigError("boundary.pieces: expected an object keyed by piece id");
  for (const auto& [k, v] : pieces.items()) {
    int id = -1;
    try {
      std::size_t used = 0;
      id = std::stoi(k, &used);
      if (used != k.size()) id = -1;
    } catch (const std::exception&) {
      id = -1;
    }
    if (id < 0 || id >= n) throw ConfigError("boundary.pieces: '" + k + "' is not a piece id of this domain");
    c[id] = parse_condition(v, "boundary.pieces." + k);
  }
  return BoundaryPartition(dom, std::move(c));
}

MeshParams parse_mesh(const json& j) {
  const std::string w = "mesh";
  check_keys(j, {"n", "h", "grade_ratio", "min_cell", "grade_depth"}, w);
  MeshParams m;
  m.n = static_cast<int>(integer_or(j, "n", m.n, w));
  m.h = number_or(j, "h", m.h, w);
  m.grade_ratio = number_or(j, "grade_ratio", m.grade_ratio, w);
  m.min_cell = number_or(j, "min_cell", m.min_cell, w);
  m.grade_depth = number_or(j, "grade_depth", m.grade_depth, w);
  if (m.n < 1) throw ConfigError("mesh.n: need at least one cell");
  if (!(m.h > 0.0)) throw ConfigError("mesh.h: must be > 0");
  if (m.grade_ratio > 1.0) throw ConfigError("mesh.grade_ratio: must lie in (0, 1] (<= 0 selects automatic)");
  if (!(m.min_cell > 0.0)) throw ConfigError("mesh.min_cell: must be > 0");
  return m;
}

void parse_solver(const json& j, SolverConfig& s) {
  const std::string w = "solver";
  check_keys(j, {"max_iter", "rel_tol", "window", "init", "precondition", "restarts", "max_step", "armijo", "shrink"},
             w);
  s.max_iter = static_cast<int>(integer_or(j, "max_iter", s.max_iter, w));
  s.rel_tol = number_or(j, "rel_tol", s.rel_tol, w);
  s.window = static_cast<int>(integer_or(j, "window", s.window, w));
  s.precondition = bool_or(j, "precondition", s.precondition, w);
  s.restarts = static_cast<int>(integer_or(j, "restarts", s.restarts, w));
  s.max_step = number_or(j, "max_step", s.max_step, w);
  s.armijo = number_or(j, "armijo", s.armijo, w);
  s.shrink = number_or(j, "shrink", s.shrink, w);
  if (j.contains("init")) {
    const auto& v = j.at("init");
    if (v == "delta_power") s.init = InitKind::delta_power;
    else if (v == "ones") s.init = InitKind::ones;
    else throw ConfigError("solver.init: expected \"delta_power\" or \"ones\"");
  }
}

void parse_hooks(const json& j, TestHooks& h) {
  check_keys(j, {"scale_weight", "negate_inequality"}, "test_hooks");
  h.scale_weight = number_or(j, "scale_weight", h.scale_weight, "test_hooks");
  h.negate_inequality = bool_or(j, "negate_inequality", h.negate_inequality, "test_hooks");
  if (!(h.scale_weight > 0.0)) throw ConfigError("test_hooks.scale_weight: must be > 0");
}

double parse_p(const json& j) {
  if (!j.contains("p")) return 2.0;
  const double p = number(j, "p", "config");
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p: must be a finite number > 1");
  return p;
}

void parse_body(RunConfig& c, const json& j) {
  const std::string& cmd = c.command;
  std::set<std::string> keys{"schema", "seed"};
  if (cmd == "estimate") keys.insert({"domain", "boundary", "p", "mesh", "solver", "test_hooks"});
  else if (cmd == "verify") keys.insert({"verify", "test_hooks"});
  else if (cmd == "sweep-sigma") keys.insert({"domain", "p", "mesh", "solver", "sweep"});
  else if (cmd == "exterior") keys.insert({"exterior", "solver"});
  else if (cmd == "concentrate") keys.insert({"domain", "boundary", "p", "mesh", "solver", "concentrate"});
  else throw ConfigError("unknown command '" + cmd + "'");
  check_keys(j, keys, "config");

  if (j.contains("schema") && j.at("schema") != kConfigSchema)
    throw ConfigError(std::string("schema: expected \"") + kConfigSchema + "\"");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.p = parse_p(j);
  if (j.contains("mesh")) c.mesh = parse_mesh(j.at("mesh"));
  if (j.contains("solver")) parse_solver(j.at("solver"), c.solver);
  if (j.contains("test_hooks")) parse_hooks(j.at("test_hooks"), c.hooks);

  if (cmd == "estimate" || cmd == "concentrate" || cmd == "sweep-sigma") {
    require(j, "domain", "config");
    c.domain = parse_domain(j.at("domain"));
  }
  if (cmd == "estimate" || cmd == "concentrate") {
    require(j, "boundary", "config");
    c.partition = parse_partition(*c.domain, j.at("boundary"));
  }
  if (cmd == "sweep-sigma") {
    require(j, "sweep", "config");
    check_keys(j.at("sweep"), {"sigmas"}, "sweep");
    require(j.at("sweep"), "sigmas", "sweep");
    c.sweep.sigmas = number_list(j.at("sweep").at("sigmas"), "sweep.sigmas");
    for (double s : c.sweep.sigmas)
      if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("sweep.sigmas: values must be positive and finite");
    if (!c.domain->is_bounded()) throw ConfigError("sweep-sigma: domain must be bounded");
  }
  if (cmd == "exterior") {
    require(j, "exterior", "config");
    const auto& e = j.at("exterior");
    const std::string w = "exterior";
    check_keys(e, {"n", "p", "R", "rho_max", "nodes", "sigmas", "branch_row"}, w);
    auto& x = c.exterior;
    x.n = static_cast<int>(integer_or(e, "n", x.n, w));
    x.p = number_or(e, "p", x.p, w);
    x.R = number_or(e, "R", x.R, w);
    x.rho_max = number_or(e, "rho_max", x.rho_max, w);
    x.nodes = static_cast<int>(integer_or(e, "nodes", x.nodes, w));
    x.branch_row = bool_or(e, "branch_row", x.branch_row, w);
    require(e, "sigmas", w);
    x.sigmas = number_list(e.at("sigmas"), "exterior.sigmas");
    if (x.n < 1 || !(x.p > 1.0) || !(x.R > 0.0) || !(x.rho_max > x.R) || x.nodes < 2)
      throw ConfigError("exterior: need n >= 1, p > 1, R > 0, rho_max > R and nodes >= 2");
    for (double s : x.sigmas)
      if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("exterior.sigmas: values must be finite and >= 0");
  }
  if (cmd == "concentrate" && j.contains("concentrate")) {
    const auto& e = j.at("concentrate");
    check_keys(e, {"levels", "far_distance"}, "concentrate");
    c.concentrate.levels = static_cast<int>(integer_or(e, "levels", c.concentrate.levels, "concentrate"));
    c.concentrate.far_distance = number_or(e, "far_distance", c.concentrate.far_distance, "concentrate");
    if (c.concentrate.levels < 2) throw ConfigError("concentrate.levels: need at least 2");
  }
  if (cmd == "concentrate" && !c.partition->has_dirichlet())
    throw ConfigError("concentrate: the partition needs a Dirichlet piece");
  if (cmd == "verify" && j.contains("verify")) {
    const auto& e = j.at("verify");
    const std::string w = "verify";
    check_keys(e, {"profiles", "fields", "exponents", "sigma_max", "lemma_tolerance", "field_tolerance", "mesh_h"}, w);
    auto& v = c.verify;
    v.profiles = static_cast<int>(integer_or(e, "profiles", v.profiles, w));
    v.fields = static_cast<int>(integer_or(e, "fields", v.fields, w));
    if (e.contains("exponents")) v.exponents = number_list(e.at("exponents"), "verify.exponents");
    v.sigma_max = number_or(e, "sigma_max", v.sigma_max, w);
    v.lemma_tolerance = number_or(e, "lemma_tolerance", v.lemma_tolerance, w);
    v.field_tolerance = number_or(e, "field_tolerance", v.field_tolerance, w);
    v.mesh_h = number_or(e, "mesh_h", v.mesh_h, w);
    if (v.profiles < 0 || v.fields < 0 || !(v.sigma_max > 0.0) || !(v.mesh_h > 0.0))
      throw ConfigError("verify: counts must be >= 0, sigma_max and mesh_h > 0");
    for (double p : v.exponents)
      if (!(p > 1.0)) throw ConfigError("verify.exponents: values must exceed 1");
  }
}

}  // namespace

RunConfig parse_config(const std::string& command, const json& j, const Overrides& o) {
  RunConfig c;
  c.command = command;
  c.raw = j;
  try {
    parse_body(c, j);
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {  // ParameterError
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  if (o.seed) c.seed = *o.seed;
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw ConfigError("--tol: must be > 0");
    c.solver.rel_tol = *o.tol;
    c.verify.lemma_tolerance = *o.tol;
  }
  if (o.max_iter) {
    if (*o.max_iter < 0) throw ConfigError("--max-iter: must be >= 0");
    c.solver.max_iter = *o.max_iter;
  }
  c.solver.exec = o.sequential ? Exec::serial : Exec::parallel;
  c.solver.seed = c.seed;
  c.solver.weight_scale = c.hooks.scale_weight;
  try {
    c.solver.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  return c;
}

}  // namespace hardy::cli
