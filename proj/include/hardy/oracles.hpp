#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/geometry.hpp"
#include "hardy/solver.hpp"
#include "hardy/space.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// Piecewise-linear profile on [0, b] (b = last breakpoint, first breakpoint 0).
struct Profile1D {
  std::vector<double> breakpoints;
  std::vector<double> values;

  double length() const { return breakpoints.back(); }
  void validate() const;
};

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// One-dimensional Hardy inequality on [0, b] with a Robin end at 0:
/// lhs = int |u'|^p + sigma |u(0)|^p,
/// rhs = C_p int |u|^p / (t + alpha)^p + (p - 1) C_p (b + alpha)^{-p} int |u|^p.
/// sigma = +inf requires u(0) = 0 and drops the boundary term.
Sides lemma1_sides(const Profile1D& profile, double sigma, double p);

/// C_p (1 + (1 + p r_in sigma_max^{1/(p-1)})^{-p}): lower bound for pure Robin problems.
double theorem2_bound(double p, double r_in, double sigma_max);

/// C_p * weighted norm + (p - 1) C_p int |u|^p / (r_in + alpha)^p, with the
/// quadrature of the functional module.
double hardy_rhs_full(const Field& field, const HardyWeight& weight, double p, double r_in);

/// Nodal interpolant of the concentrating family: delta^{f + 1 - 1/p} for
/// delta <= eps, linear down to 0 on [eps, 2 eps], 0 beyond; f = eps within
/// distance r of the anchor, 1/p beyond r + eps, linear in between.
Field u_eps_field(const SpacePtr& space, const BoundaryPartition& partition, const Point& anchor, double r,
                  double eps, double p);

/// C_p + sigma alpha^{p-1} R^{n-1} / int_0^R s^{n-1} (R + alpha - s)^{-1} ds.
double ball_upper_bound(int n, double p, double sigma, double R);

struct SigmaProbeRow {
  double sigma = 0.0;
  double lambda = 0.0;
  double theorem2 = 0.0;
  bool converged = false;
};

struct SigmaProbe {
  std::vector<SigmaProbeRow> rows;  // sorted by sigma
  bool strictly_decreasing = false;  // observation only
};

/// Solver estimate for each constant sigma on a Robin-only domain.
SigmaProbe sigma_limit_probe(const Domain& domain, double p, std::vector<double> sigmas, const MeshParams& mesh,
                             const SolverConfig& config);

struct Certificates {
  std::optional<double> lower;
  std::optional<double> upper;
  std::string lower_source;
  std::string upper_source;
  std::vector<std::string> notes;
};

/// Closed-form lower/upper certificates recognised for a configuration.
Certificates analytic_certificates(const Domain& domain, const BoundaryPartition& partition, double p);

}  // namespace hardy
