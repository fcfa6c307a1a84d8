#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/geometry.hpp"
#include "hardy/space.hpp"

namespace hardy {

/// ((p-1)/p)^p.
double cp_constant(double p);

/// ((p-1)/p) * sigma^(1/(1-p)); +inf for sigma = 0 and 0 for sigma = +inf.
double alpha_at(double p, double sigma);

/// (delta(x) + alpha(x))^(-p), alpha taken from the piece containing the projection.
double weight_at(const Domain& domain, const BoundaryPartition& partition, double p, std::span<const double> x);

struct WeightRecord {
  Point x;
  double delta = 0.0;
  int piece_id = 0;
  double sigma = 0.0;
  double alpha = 0.0;
  double w = 0.0;
};

/// Weight cached at the volume quadrature points of one space.
struct HardyWeight {
  double p = 2.0;
  std::uint64_t space_id = 0;
  std::vector<WeightRecord> records;
  /// Some record projects onto a sigma = 0 piece, so alpha = +inf and w = 0 there.
  bool degenerate = false;
};

/// For the exterior space the weight is |x|^{-p}; records store alpha = R so that
/// w = (delta + alpha)^{-p} still holds.
HardyWeight build_weight(const Space& space, const BoundaryPartition& partition, double p);

}  // namespace hardy
