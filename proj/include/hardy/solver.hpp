#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/kernels.hpp"
#include "hardy/space.hpp"

namespace hardy {

enum class InitKind { delta_power, ones, custom };

struct SolverConfig {
  int max_iter = 5000;
  double rel_tol = 1e-9;
  int window = 10;
  InitKind init = InitKind::delta_power;
  std::vector<double> custom;  // nodal values for InitKind::custom
  // Backtracking: the first trial step of each iteration is min(2 * previous, max_step).
  double initial_step = 1.0;
  double max_step = 16.0;
  double shrink = 0.5;
  double armijo = 1e-4;
  bool precondition = true;
  Exec exec = Exec::parallel;
  /// Additional randomised starts (perturbations of the initial field).
  int restarts = 0;
  std::uint64_t seed = 0;
  /// Test hook: multiplies the Hardy weight (a deliberate quadrature fault).
  double weight_scale = 1.0;

  void validate() const;
};

struct QuotientReport {
  double lambda_estimate = 0.0;
  int iterations = 0;
  std::vector<double> history;
  std::optional<double> analytic_lower;
  std::optional<double> analytic_upper;
  std::string lower_source;
  bool converged = false;
  bool violation = false;
  std::string stop_reason;
  std::vector<std::string> notes;
  std::vector<double> start_estimates;  // one per start when restarts > 0
  MeshSummary mesh;
  Terms terms;  // of the returned field, normalised so that terms.norm = 1
  Field field;
};

/// Minimise the quotient over P1 fields of `space`. The estimate is the quotient
/// of an explicit discrete field, hence an upper bound for the discrete problem.
QuotientReport minimize_quotient(const SpacePtr& space, const BoundaryPartition& partition, double p,
                                 const SolverConfig& config);

/// Initial field according to `config.init` (pins applied, not normalised).
Field initial_field(const SpacePtr& space, const BoundaryPartition& partition, double p,
                    const SolverConfig& config);

/// Mesh parameters for the default discretisation of each domain variant.
struct MeshParams {
  int n = 64;               // cells of the first 1D/radial level
  double h = 0.125;         // polygon target edge length
  double grade_ratio = -1;  // <= 0 selects the automatic ratio
  double min_cell = 1e-100;  // target smallest cell (relative to the length) for the automatic ratio
  double grade_depth = -1;  // polygon grading depth; < 0 selects R_in / 4
};

struct SequenceLevel {
  Field field;
  double quotient = 0.0;
  QuotientReport report;
};

/// Nested meshes with doubling node counts (graded toward the Dirichlet pieces);
/// each level is warm-started from the previous one, so quotients do not increase.
std::vector<SequenceLevel> minimizing_sequence(const Domain& domain, const BoundaryPartition& partition, double p,
                                               int levels, const MeshParams& mesh, const SolverConfig& config);

/// Integral of |grad u|^p over the cells whose centroid satisfies `region`.
double local_gradient_energy(const Field& field, const std::function<bool(const Point&)>& region, double p);

/// Default first-level mesh used by the CLI and the sequence driver.
SpacePtr default_space(const Domain& domain, const BoundaryPartition& partition, double p, const MeshParams& mesh);

}  // namespace hardy
