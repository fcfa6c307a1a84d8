#include "hardy/exterior.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/errors.hpp"
#include "hardy/functional.hpp"
#include "hardy/weights.hpp"

namespace hardy {

void ExteriorProblem::validate() const {
  if (n < 1) throw ParameterError("dimension must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p must exceed 1");
  if (!(R > 0.0)) throw ParameterError("R must be > 0");
  if (!(rho_max > R)) throw ParameterError("rho_max must exceed R");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be finite and >= 0");
}

double ExteriorProblem::gamma() const {
  if (p <= n) return 0.0;
  return (p - n) / p * std::pow(sigma, 1.0 / (p - 1.0));
}

Domain ExteriorProblem::domain() const { return Domain::exterior_ball(n, R, rho_max); }

BoundaryPartition ExteriorProblem::partition() const {
  return BoundaryPartition::uniform(domain(), BoundaryCondition::robin(sigma));
}

double classical_exterior_constant(int n, double p) {
  if (!(p > 1.0)) throw ParameterError("p must exceed 1");
  if (!(n > p)) throw ParameterError("classical exterior constant needs n > p");
  return std::pow(n - p, p) / std::pow(p, p);
}

double robin_exterior_constant(int n, double p, double sigma, double R) {
  if (!(p > n)) throw ParameterError("Robin exterior constant needs p > n");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be positive and finite");
  if (!(R > 0.0)) throw ParameterError("R must be > 0");
  const double first = std::pow(p - n, p) / std::pow(p, p);
  const double second = std::pow(R, p) * std::pow(sigma, p / (p - 1.0));
  return std::min(first, second);
}

double exterior_branch_sigma(int n, double p, double R) {
  if (!(p > n)) throw ParameterError("branch switch exists only for p > n");
  return std::pow((p - n) / (p * R), p - 1.0);
}

double radial_quotient(const ExteriorProblem& problem, const RadialLogMesh& mesh, const std::vector<double>& f) {
  problem.validate();
  const Domain dom = problem.domain();
  const auto space = Space::exterior(dom, mesh, problem.p);
  if (static_cast<int>(f.size()) != space->node_count()) throw ParameterError("profile size does not match the mesh");
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  if (problem.n >= problem.p && std::abs(f.back()) > 1e-14 * fmax)
    throw ParameterError("for n >= p the profile must vanish at rho_max");
  const auto part = problem.partition();
  Field field = make_field(space, part);
  field.values = f;
  field.values.back() = space->forced_pins().back() ? 0.0 : f.back();
  const auto w = build_weight(*space, part, problem.p);
  return rayleigh(field, part, w, problem.p, Exec::serial);
}

double uk_quotient(double k_log, double R, double sigma, int n) {
  if (!(k_log > 0.0)) throw ParameterError("log k must be > 0");
  if (!(R > 0.0) || !(sigma >= 0.0) || n < 1) throw ParameterError("invalid u_k parameters");
  // Numerator and denominator share the factor |S^{n-1}|; in s = log(r/R),
  // int |f_s|^n ds = k_log^{1-n} and int (1 - s/k_log)^n ds = k_log / (n + 1).
  return (std::pow(k_log, 1.0 - n) + sigma * std::pow(R, n - 1)) * (n + 1) / k_log;
}

std::vector<double> uk_profile(const RadialLogMesh& mesh, double k_log) {
  std::vector<double> f;
  f.reserve(mesh.s_nodes.size());
  for (double s : mesh.s_nodes) f.push_back(std::max(0.0, 1.0 - s / k_log));
  return f;
}

QuotientReport brute_force_radial_min(const ExteriorProblem& problem, const RadialLogMesh& mesh,
                                      const SolverConfig& config) {
  problem.validate();
  const auto space = Space::exterior(problem.domain(), mesh, problem.p);
  return minimize_quotient(space, problem.partition(), problem.p, config);
}

}  // namespace hardy
