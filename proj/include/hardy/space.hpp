#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/geometry.hpp"
#include "hardy/mesh.hpp"

namespace hardy {

enum class SpaceKind { interval, triangles, ball_radial, exterior_log };

/// A cell on which the P1 gradient is constant: grad u = sum_k u[nodes[k]] * grad[k].
/// In 1D/radial variants only the x component is used.
struct GradCell {
  std::array<int, 3> nodes{};
  std::array<Vec2, 3> grad{};
  int count = 0;
  double measure = 0.0;  // integration weight of |grad u|^p over the cell
  Point centroid;
};

/// Quadrature point: u(x) = sum_k shape[k] * u[nodes[k]].
struct Sample {
  std::array<int, 3> nodes{};
  std::array<double, 3> shape{};
  int count = 0;
  double base = 0.0;  // quadrature weight times the volume element
};

struct BoundarySample : Sample {
  int piece_id = 0;
};

/// Compressed incidence lists: for node i, entries [offset[i], offset[i+1]) hold
/// slot = 3 * item + local index.
struct Incidence {
  std::vector<int> offset;
  std::vector<int> slot;
};

struct MeshSummary {
  std::string kind;
  int nodes = 0;
  int cells = 0;
  double min_size = 0.0;
  double max_size = 0.0;
};

/// Piecewise-linear discretisation of a domain: gradient cells, volume and
/// boundary quadrature, node coordinates and boundary tags. Immutable.
class Space {
 public:
  static std::shared_ptr<const Space> interval(const Domain& domain, const Mesh1D& mesh);
  static std::shared_ptr<const Space> triangles(const Domain& domain, const TriMesh& mesh);
  /// Radial profiles u(|x|) on a ball; the mesh lives on [0, R].
  static std::shared_ptr<const Space> ball_radial(const Domain& domain, const Mesh1D& mesh);
  /// Radial profiles on the exterior of a ball in s = log(r / R). The gradient
  /// measure depends on p, so the space is bound to one exponent. The outer node
  /// is pinned when n >= p; for p > n the profile is continued as a constant
  /// beyond rho_max and the tail is integrated analytically.
  static std::shared_ptr<const Space> exterior(const Domain& domain, const RadialLogMesh& mesh, double p);

  SpaceKind kind() const { return kind_; }
  const Domain& domain() const { return domain_; }
  int node_count() const { return static_cast<int>(node_x_.size()); }
  const std::vector<Point>& node_coordinates() const { return node_x_; }
  /// Boundary pieces containing each node (empty for interior nodes).
  const std::vector<std::vector<int>>& node_pieces() const { return node_pieces_; }
  /// Nodes pinned independently of the partition (exterior outer node for n >= p).
  const std::vector<char>& forced_pins() const { return forced_; }

  const std::vector<GradCell>& cells() const { return cells_; }
  const std::vector<Sample>& samples() const { return samples_; }
  const std::vector<Point>& sample_points() const { return sample_x_; }
  const std::vector<BoundarySample>& boundary_samples() const { return bsamples_; }
  const Incidence& cell_incidence() const { return cell_inc_; }
  const Incidence& sample_incidence() const { return sample_inc_; }
  const Incidence& boundary_incidence() const { return bsample_inc_; }

  /// Exponent the space is bound to (exterior only); NaN otherwise.
  double bound_exponent() const { return bound_p_; }
  /// Throws ParameterError if the space is bound to a different exponent.
  void check_exponent(double p) const;

  /// Radial coordinate of each node for radial variants, first coordinate otherwise.
  double node_radius(int i) const { return node_x_[i][0]; }
  MeshSummary summary() const { return summary_; }
  std::uint64_t id() const { return id_; }

 private:
  Space(SpaceKind kind, Domain domain);
  void finalize();

  SpaceKind kind_;
  Domain domain_;
  std::vector<Point> node_x_;
  std::vector<std::vector<int>> node_pieces_;
  std::vector<char> forced_;
  std::vector<GradCell> cells_;
  std::vector<Sample> samples_;
  std::vector<Point> sample_x_;
  std::vector<BoundarySample> bsamples_;
  Incidence cell_inc_, sample_inc_, bsample_inc_;
  double bound_p_;
  MeshSummary summary_;
  std::uint64_t id_ = 0;
};

using SpacePtr = std::shared_ptr<const Space>;

/// Nodal values of a P1 trial function; pinned entries are exactly 0.
struct Field {
  SpacePtr space;
  std::vector<double> values;
  std::vector<char> pinned;

  int free_count() const;
  /// Zero the pinned entries.
  void enforce_pins();
};

/// Zero field with Dirichlet pins from the partition (plus forced pins).
Field make_field(const SpacePtr& space, const BoundaryPartition& partition);

}  // namespace hardy
