#include "hardy/weights.hpp"

#include <cmath>

#include "hardy/errors.hpp"

namespace hardy {

double cp_constant(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("C_p requires p > 1");
  return std::pow((p - 1.0) / p, p);
}

double alpha_at(double p, double sigma) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("alpha requires p > 1");
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
  if (sigma == kInfinity) return 0.0;
  if (sigma == 0.0) return kInfinity;
  return (p - 1.0) / p * std::pow(sigma, 1.0 / (1.0 - p));
}

namespace {

double weight_value(double delta, double alpha, double p) {
  if (alpha == kInfinity) return 0.0;
  return std::pow(delta + alpha, -p);
}

}  // namespace

double weight_at(const Domain& domain, const BoundaryPartition& partition, double p, std::span<const double> x) {
  if (partition.size() != domain.piece_count()) throw ParameterError("partition does not match the domain");
  if (const auto* ext = domain.as<ExteriorBall>()) {
    const double r = distance_to_boundary(domain, x) + ext->radius;
    return std::pow(r, -p);
  }
  const double delta = distance_to_boundary(domain, x);
  const auto proj = boundary_projection(domain, x);
  return weight_value(delta, alpha_at(p, partition.sigma(proj.piece_id)), p);
}

HardyWeight build_weight(const Space& space, const BoundaryPartition& partition, double p) {
  space.check_exponent(p);
  if (partition.size() != space.domain().piece_count())
    throw ParameterError("partition does not match the space's domain");
  HardyWeight hw;
  hw.p = p;
  hw.space_id = space.id();
  const auto& xs = space.sample_points();
  hw.records.resize(xs.size());
  const Domain& dom = space.domain();
  const auto* ext = dom.as<ExteriorBall>();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    WeightRecord& r = hw.records[i];
    r.x = xs[i];
    if (ext) {
      // Tail samples sit at rho_max, which lies inside the truncated domain.
      r.delta = xs[i][0] - ext->radius;
      r.piece_id = 0;
      r.sigma = partition.sigma(0);
      r.alpha = ext->radius;
      r.w = std::pow(xs[i][0], -p);
      continue;
    }
    const auto proj = boundary_projection(dom, xs[i]);
    r.delta = distance_to_boundary(dom, xs[i]);
    r.piece_id = proj.piece_id;
    r.sigma = partition.sigma(proj.piece_id);
    r.alpha = alpha_at(p, r.sigma);
    r.w = weight_value(r.delta, r.alpha, p);
    if (r.alpha == kInfinity) hw.degenerate = true;
    if (!std::isfinite(r.w)) throw NumericalError("weight is not finite at a quadrature point");
  }
  return hw;
}

}  // namespace hardy
