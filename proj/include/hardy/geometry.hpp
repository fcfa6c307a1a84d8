#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hardy {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

using Point = std::vector<double>;

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

/// Counter-clockwise, strictly convex. Edge i runs from vertex i to vertex i+1.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

struct Ball {
  int dim = 2;
  double radius = 1.0;
};

/// Complement of the closed ball of radius `radius`; `rho_max` truncates the
/// radial variable for numerics and is not part of the boundary.
struct ExteriorBall {
  int dim = 2;
  double radius = 1.0;
  double rho_max = 10.0;
};

using Shape = std::variant<Interval, ConvexPolygon, Ball, ExteriorBall>;

/// Immutable validated domain.
class Domain {
 public:
  static Domain interval(double a, double b);
  static Domain polygon(std::vector<Vec2> vertices);
  static Domain ball(int dim, double radius);
  static Domain exterior_ball(int dim, double radius, double rho_max);

  const Shape& shape() const { return shape_; }
  /// Ambient dimension of points passed to the geometric queries.
  int ambient_dim() const;
  /// Number of boundary pieces (interval: 2 endpoints, polygon: edges, balls: 1 sphere).
  int piece_count() const;
  /// Length scale used for tolerances.
  double scale() const;
  bool is_bounded() const { return !std::holds_alternative<ExteriorBall>(shape_); }
  std::string kind() const;

  template <class T>
  const T* as() const { return std::get_if<T>(&shape_); }

 private:
  explicit Domain(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

/// Multiplicity reported when the nearest set is a continuum (centre of a ball).
inline constexpr int kContinuumMultiplicity = std::numeric_limits<int>::max();

struct Projection {
  Point point;
  int piece_id = 0;
  int multiplicity = 1;
};

double distance_to_boundary(const Domain& domain, std::span<const double> x);
Projection boundary_projection(const Domain& domain, std::span<const double> x, double tol = -1.0);
double inradius(const Domain& domain);
int nearest_count(const Domain& domain, std::span<const double> x, double tol);

/// Total surface measure of the boundary (counting measure in 1D).
double boundary_measure(const Domain& domain);

/// Area of the unit sphere S^{n-1} in R^n (2 for n = 1).
double unit_sphere_area(int n);

// Polygon helpers shared with the mesher.
double polygon_area(const ConvexPolygon& poly);
double polygon_perimeter(const ConvexPolygon& poly);
/// Signed distance from x to the line of edge i, positive inside.
double edge_line_distance(const ConvexPolygon& poly, int edge, Vec2 x);
/// Euclidean distance from x to the closed segment of edge i.
double edge_segment_distance(const ConvexPolygon& poly, int edge, Vec2 x);

}  // namespace hardy
