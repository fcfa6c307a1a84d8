#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardy/oracles.hpp"
#include "hardy/solver.hpp"

namespace hardy {

inline constexpr const char* kReportSchema = "hardy.report.v1";

std::string tool_version();

/// FNV-1a (64 bit) of the canonical serialisation (sorted keys, no whitespace).
std::uint64_t config_hash(const nlohmann::json& config);
std::string hex64(std::uint64_t v);

nlohmann::json to_json(const MeshSummary& m);
nlohmann::json to_json(const QuotientReport& r);

/// Envelope carried by every emitted report.
nlohmann::json report_envelope(const std::string& command, const nlohmann::json& config, std::uint64_t seed);

// CSV text; numbers use %.17g so that runs can be compared byte for byte.
std::string history_csv(const std::vector<double>& history);
std::string sweep_csv(const SigmaProbe& probe);

struct ExteriorRow {
  int n = 0;
  double p = 0, sigma = 0, R = 0, rho_max = 0, estimate = 0, certificate = 0;
  bool branch = false;
};
std::string exterior_csv(const std::vector<ExteriorRow>& rows);

struct ConcentrateRow {
  int level = 0;
  double quotient = 0, near_energy = 0, far_energy = 0;
};
std::string concentrate_csv(const std::vector<ConcentrateRow>& rows);

std::string fmt_real(double v);

}  // namespace hardy
