#pragma once

#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/geometry.hpp"
#include "hardy/mesh.hpp"
#include "hardy/solver.hpp"

namespace hardy {

/// Radial problem on the complement of the ball of radius R in R^n, truncated at rho_max.
struct ExteriorProblem {
  int n = 2;
  double p = 2.0;
  double R = 1.0;
  double sigma = 0.0;
  double rho_max = 10.0;

  void validate() const;
  /// ((p - n)/p) sigma^{1/(p-1)} for p > n, else 0.
  double gamma() const;
  Domain domain() const;
  BoundaryPartition partition() const;
};

/// ((n - p)/p)^p, valid for n > p.
double classical_exterior_constant(int n, double p);

/// min{((p - n)/p)^p, R^p sigma^{p/(p-1)}}, valid for p > n and sigma > 0.
double robin_exterior_constant(int n, double p, double sigma, double R);

/// sigma at which the two branches of robin_exterior_constant meet.
double exterior_branch_sigma(int n, double p, double R);

/// Quotient of a profile given at the nodes of a log mesh (linear in s = log(r/R)):
/// (int |f'|^p r^{n-1} dr + sigma R^{n-1} |f(R)|^p) / int |f|^p r^{n-1-p} dr.
/// For p > n the profile continues as a constant beyond rho_max; for n >= p it
/// must vanish at rho_max.
double radial_quotient(const ExteriorProblem& problem, const RadialLogMesh& mesh, const std::vector<double>& f);

/// Closed-form quotient of u_k = (1 - log(|x|/R)/log k)_+ for p = n.
double uk_quotient(double k_log, double R, double sigma, int n);

/// Nodal values of u_k on a log mesh (exact, since u_k is linear in s).
std::vector<double> uk_profile(const RadialLogMesh& mesh, double k_log);

/// Descent over nodal radial profiles; the report carries the Robin (p > n)
/// or classical (n > p) constant as analytic_lower.
QuotientReport brute_force_radial_min(const ExteriorProblem& problem, const RadialLogMesh& mesh,
                                      const SolverConfig& config);

}  // namespace hardy
