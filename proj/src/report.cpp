#include "hardy/report.hpp"

#include <cmath>
#include <cstdio>

namespace hardy {

using nlohmann::json;

std::string tool_version() { return HARDY_VERSION; }

std::uint64_t config_hash(const json& config) {
  const std::string s = config.dump();  // object keys are ordered, so this is canonical
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {
json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(fmt_real(v)); }
}  // namespace

json to_json(const MeshSummary& m) {
  return {{"kind", m.kind}, {"nodes", m.nodes}, {"cells", m.cells}, {"min_size", m.min_size},
          {"max_size", m.max_size}};
}

json to_json(const QuotientReport& r) {
  json j;
  j["lambda_estimate"] = real_or_null(r.lambda_estimate);
  j["estimate_kind"] = "upper bound (quotient of an explicit discrete field)";
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["stop_reason"] = r.stop_reason;
  j["analytic_lower"] = r.analytic_lower ? json(*r.analytic_lower) : json(nullptr);
  j["analytic_upper"] = r.analytic_upper ? json(*r.analytic_upper) : json(nullptr);
  j["lower_source"] = r.lower_source;
  j["violation"] = r.violation;
  j["notes"] = r.notes;
  j["terms"] = {{"energy", r.terms.energy}, {"boundary", r.terms.boundary}, {"norm", r.terms.norm}};
  j["mesh"] = to_json(r.mesh);
  if (!r.start_estimates.empty()) j["start_estimates"] = r.start_estimates;
  return j;
}

json report_envelope(const std::string& command, const json& config, std::uint64_t seed) {
  return {{"schema", kReportSchema},
          {"command", command},
          {"tool_version", tool_version()},
          {"config_hash", hex64(config_hash(config))},
          {"seed", seed}};
}

std::string history_csv(const std::vector<double>& history) {
  std::string s = "iteration,quotient\n";
  for (std::size_t i = 0; i < history.size(); ++i) s += std::to_string(i) + "," + fmt_real(history[i]) + "\n";
  return s;
}

std::string sweep_csv(const SigmaProbe& probe) {
  std::string s = "sigma,lambda,theorem2_bound\n";
  for (const auto& r : probe.rows)
    s += fmt_real(r.sigma) + "," + fmt_real(r.lambda) + "," + fmt_real(r.theorem2) + "\n";
  return s;
}

std::string exterior_csv(const std::vector<ExteriorRow>& rows) {
  std::string s = "n,p,sigma,R,rho_max,estimate,certificate,gap,branch_switch\n";
  for (const auto& r : rows)
    s += std::to_string(r.n) + "," + fmt_real(r.p) + "," + fmt_real(r.sigma) + "," + fmt_real(r.R) + "," +
         fmt_real(r.rho_max) + "," + fmt_real(r.estimate) + "," + fmt_real(r.certificate) + "," +
         fmt_real(r.estimate - r.certificate) + "," + (r.branch ? "1" : "0") + "\n";
  return s;
}

std::string concentrate_csv(const std::vector<ConcentrateRow>& rows) {
  std::string s = "level,quotient,near_energy,far_energy\n";
  for (const auto& r : rows)
    s += std::to_string(r.level) + "," + fmt_real(r.quotient) + "," + fmt_real(r.near_energy) + "," +
         fmt_real(r.far_energy) + "\n";
  return s;
}

}  // namespace hardy
