#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardy/boundary.hpp"
#include "hardy/geometry.hpp"
#include "hardy/solver.hpp"

namespace hardy::cli {

inline constexpr const char* kConfigSchema = "hardy.config.v1";

enum class ExitCode : int { ok = 0, usage = 1, violation = 2 };

/// Malformed configuration or command line (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::vector<double> sigmas;
};

struct ExteriorSpec {
  int n = 2;
  double p = 3.0;
  double R = 1.0;
  double rho_max = 1e6;
  int nodes = 2000;
  std::vector<double> sigmas;
  bool branch_row = true;
};

struct ConcentrateSpec {
  int levels = 4;
  double far_distance = 0.5;  // far region: distance to the Dirichlet part >= this
};

struct VerifySpec {
  int profiles = 200;
  int fields = 100;
  std::vector<double> exponents{1.5, 2.0, 3.0};
  double sigma_max = 10.0;
  double lemma_tolerance = 1e-9;
  double field_tolerance = 1e-6;
  double mesh_h = 0.125;
};

struct TestHooks {
  double scale_weight = 1.0;       // multiplies the Hardy weight in the solver
  bool negate_inequality = false;  // verify checks the reversed inequalities
};

/// Parsed, validated configuration for one command.
struct RunConfig {
  std::string command;
  nlohmann::json raw;  // canonical input, hashed into every report
  std::optional<Domain> domain;
  std::optional<BoundaryPartition> partition;
  double p = 2.0;
  MeshParams mesh;
  SolverConfig solver;
  std::uint64_t seed = 0;
  SweepSpec sweep;
  ExteriorSpec exterior;
  ConcentrateSpec concentrate;
  VerifySpec verify;
  TestHooks hooks;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  bool sequential = false;
  std::optional<double> tol;
  std::optional<int> max_iter;
};

/// Validate `j` for `command` (unknown keys are rejected) and apply flag overrides.
RunConfig parse_config(const std::string& command, const nlohmann::json& j, const Overrides& o);

ExitCode cmd_estimate(const RunConfig& c, const std::string& out_dir, std::ostream& log);
ExitCode cmd_verify(const RunConfig& c, const std::string& out_dir, std::ostream& log);
ExitCode cmd_sweep_sigma(const RunConfig& c, const std::string& out_dir, std::ostream& log);
ExitCode cmd_exterior(const RunConfig& c, const std::string& out_dir, std::ostream& log);
ExitCode cmd_concentrate(const RunConfig& c, const std::string& out_dir, std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hardy::cli
