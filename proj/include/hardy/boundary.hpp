#pragma once

#include <limits>
#include <string>
#include <vector>

#include "hardy/geometry.hpp"

namespace hardy {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Dirichlet is stored as sigma = +inf.
struct BoundaryCondition {
  double sigma = kInfinity;

  static BoundaryCondition dirichlet() { return {kInfinity}; }
  static BoundaryCondition robin(double sigma);
  bool is_dirichlet() const { return sigma == kInfinity; }
};

struct BoundaryPiece {
  int piece_id = 0;
  std::string geometry;  // "endpoint a=0", "edge (0,0)-(1,0)", "sphere r=1"
  BoundaryCondition condition;
};

/// Piecewise-constant sigma over the domain's boundary pieces.
class BoundaryPartition {
 public:
  BoundaryPartition() = default;
  BoundaryPartition(const Domain& domain, std::vector<BoundaryCondition> conditions);

  static BoundaryPartition uniform(const Domain& domain, BoundaryCondition c);

  const BoundaryCondition& condition(int piece_id) const { return conditions_.at(piece_id); }
  double sigma(int piece_id) const { return conditions_.at(piece_id).sigma; }
  int size() const { return static_cast<int>(conditions_.size()); }
  bool has_dirichlet() const;
  bool all_dirichlet() const;
  /// Largest finite sigma over Robin pieces (0 when there are none).
  double sigma_max() const;
  bool sigma_constant() const;
  std::vector<int> dirichlet_pieces() const;
  const std::vector<BoundaryCondition>& conditions() const { return conditions_; }

 private:
  std::vector<BoundaryCondition> conditions_;
};

std::vector<BoundaryPiece> boundary_pieces(const Domain& domain, const BoundaryPartition& partition);

}  // namespace hardy
