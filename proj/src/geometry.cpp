#include "hardy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hardy/boundary.hpp"
#include "hardy/errors.hpp"

namespace hardy {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

namespace {

double euclid(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void require_dim(std::span<const double> x, int dim) {
  if (static_cast<int>(x.size()) != dim) {
    throw DomainError("point has dimension " + std::to_string(x.size()) + ", domain expects " +
                      std::to_string(dim));
  }
}

Vec2 edge_start(const ConvexPolygon& p, int i) { return p.vertices[i]; }
Vec2 edge_end(const ConvexPolygon& p, int i) {
  return p.vertices[(i + 1) % p.vertices.size()];
}

Vec2 foot_on_edge(const ConvexPolygon& p, int i, Vec2 x) {
  const Vec2 a = edge_start(p, i);
  const Vec2 d = edge_end(p, i) - a;
  const double t = std::clamp(dot(x - a, d) / dot(d, d), 0.0, 1.0);
  return a + t * d;
}

bool lex_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

// ---------------------------------------------------------------------------

Domain Domain::interval(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a)) {
    throw ParameterError("interval requires finite a < b");
  }
  return Domain(Interval{a, b});
}

Domain Domain::polygon(std::vector<Vec2> vertices) {
  const auto n = vertices.size();
  if (n < 3) throw ParameterError("polygon requires at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (!(cross(e0, e1) > 0.0)) {
      throw ParameterError("polygon must be counter-clockwise and strictly convex (vertex " +
                           std::to_string((i + 1) % n) + ")");
    }
  }
  return Domain(ConvexPolygon{std::move(vertices)});
}

Domain Domain::ball(int dim, double radius) {
  if (dim < 1) throw ParameterError("ball dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ParameterError("ball radius must be positive");
  return Domain(Ball{dim, radius});
}

Domain Domain::exterior_ball(int dim, double radius, double rho_max) {
  if (dim < 1) throw ParameterError("exterior ball dimension must be >= 1");
  if (!(radius > 0.0) || !(rho_max > radius) || !std::isfinite(rho_max)) {
    throw ParameterError("exterior ball requires rho_max > R > 0");
  }
  return Domain(ExteriorBall{dim, radius, rho_max});
}

int Domain::ambient_dim() const {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) return 1;
        else if constexpr (std::is_same_v<T, ConvexPolygon>) return 2;
        else return s.dim;
      },
      shape_);
}

int Domain::piece_count() const {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) return 2;
        else if constexpr (std::is_same_v<T, ConvexPolygon>) return static_cast<int>(s.vertices.size());
        else return 1;
      },
      shape_);
}

double Domain::scale() const {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) return s.b - s.a;
        else if constexpr (std::is_same_v<T, ConvexPolygon>) {
          double d = 0.0;
          for (const auto& a : s.vertices)
            for (const auto& b : s.vertices) d = std::max(d, norm(a - b));
          return d;
        } else if constexpr (std::is_same_v<T, Ball>) return 2.0 * s.radius;
        else return s.radius;
      },
      shape_);
}

std::string Domain::kind() const {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) return "interval";
        else if constexpr (std::is_same_v<T, ConvexPolygon>) return "polygon";
        else if constexpr (std::is_same_v<T, Ball>) return "ball";
        else return "exterior_ball";
      },
      shape_);
}

// ---------------------------------------------------------------------------

double polygon_area(const ConvexPolygon& poly) {
  double a = 0.0;
  const auto n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly.vertices[i], poly.vertices[(i + 1) % n]);
  return 0.5 * a;
}

double polygon_perimeter(const ConvexPolygon& poly) {
  double l = 0.0;
  const auto n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) l += norm(poly.vertices[(i + 1) % n] - poly.vertices[i]);
  return l;
}

double edge_line_distance(const ConvexPolygon& poly, int edge, Vec2 x) {
  const Vec2 a = edge_start(poly, edge);
  const Vec2 d = edge_end(poly, edge) - a;
  // Inward normal of a CCW edge is the left normal.
  return cross(d, x - a) / norm(d);
}

double edge_segment_distance(const ConvexPolygon& poly, int edge, Vec2 x) {
  return norm(x - foot_on_edge(poly, edge, x));
}

double unit_sphere_area(int n) {
  if (n < 1) throw ParameterError("sphere dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

// ---------------------------------------------------------------------------

namespace {

struct Candidate {
  Point point;
  int piece_id;
  double dist;
};

/// All boundary points attaining the distance within `tol`, deduplicated,
/// ordered by piece id then lexicographically.
std::vector<Candidate> nearest_set(const Domain& domain, std::span<const double> x, double tol,
                                   double& delta, bool& continuum) {
  continuum = false;
  std::vector<Candidate> out;
  const double eps_in = 1e-12 * domain.scale();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          require_dim(x, 1);
          const double t = x[0];
          if (t < s.a - eps_in || t > s.b + eps_in) throw DomainError("point outside interval");
          const double d0 = std::max(0.0, t - s.a);
          const double d1 = std::max(0.0, s.b - t);
          delta = std::min(d0, d1);
          if (d0 <= delta + tol) out.push_back({{s.a}, 0, d0});
          if (d1 <= delta + tol) out.push_back({{s.b}, 1, d1});
        } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
          require_dim(x, 2);
          const Vec2 p{x[0], x[1]};
          const int m = static_cast<int>(s.vertices.size());
          double dmin = kInfinity;
          for (int i = 0; i < m; ++i) {
            const double d = edge_line_distance(s, i, p);
            if (d < -eps_in) throw DomainError("point outside polygon");
            dmin = std::min(dmin, d);
          }
          delta = std::max(0.0, dmin);
          for (int i = 0; i < m; ++i) {
            const Vec2 f = foot_on_edge(s, i, p);
            const double d = norm(p - f);
            if (d > delta + tol) continue;
            bool dup = false;
            for (const auto& c : out) {
              if (std::hypot(c.point[0] - f.x, c.point[1] - f.y) <= tol) dup = true;
            }
            if (!dup) out.push_back({{f.x, f.y}, i, d});
          }
        } else if constexpr (std::is_same_v<T, Ball>) {
          require_dim(x, s.dim);
          const double r = euclid(x);
          if (r > s.radius + eps_in) throw DomainError("point outside ball");
          delta = std::max(0.0, s.radius - r);
          if (r <= tol) {
            continuum = s.dim > 1;
            Point y(s.dim, 0.0);
            y[0] = -s.radius;  // lexicographically smallest point of the sphere
            out.push_back({y, 0, delta});
            if (s.dim == 1) out.push_back({{s.radius}, 0, delta});
          } else {
            Point y(x.begin(), x.end());
            for (auto& v : y) v *= s.radius / r;
            out.push_back({y, 0, delta});
          }
        } else {
          require_dim(x, s.dim);
          const double r = euclid(x);
          if (r < s.radius - eps_in) throw DomainError("point inside the excluded ball");
          delta = std::max(0.0, r - s.radius);
          Point y(x.begin(), x.end());
          for (auto& v : y) v *= s.radius / r;
          out.push_back({y, 0, delta});
        }
      },
      domain.shape());
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.piece_id != b.piece_id) return a.piece_id < b.piece_id;
    return lex_less(a.point, b.point);
  });
  return out;
}

}  // namespace

double distance_to_boundary(const Domain& domain, std::span<const double> x) {
  double delta = 0.0;
  bool continuum = false;
  nearest_set(domain, x, 0.0, delta, continuum);
  return delta;
}

Projection boundary_projection(const Domain& domain, std::span<const double> x, double tol) {
  if (tol < 0.0) tol = 1e-12 * domain.scale();
  double delta = 0.0;
  bool continuum = false;
  auto set = nearest_set(domain, x, tol, delta, continuum);
  Projection p;
  p.point = set.front().point;
  p.piece_id = set.front().piece_id;
  p.multiplicity = continuum ? kContinuumMultiplicity : static_cast<int>(set.size());
  return p;
}

int nearest_count(const Domain& domain, std::span<const double> x, double tol) {
  if (!(tol > 0.0)) throw ParameterError("nearest_count requires tol > 0");
  double delta = 0.0;
  bool continuum = false;
  auto set = nearest_set(domain, x, tol, delta, continuum);
  return continuum ? kContinuumMultiplicity : static_cast<int>(set.size());
}

namespace {

/// Largest inscribed circle: max r subject to n_i . x + r <= c_i for every edge.
/// The optimum sits on a vertex of the 3-variable feasible set, so enumerating
/// triples of active constraints is exact for small polygons.
double polygon_inradius(const ConvexPolygon& poly) {
  const int m = static_cast<int>(poly.vertices.size());
  struct HalfPlane {
    double nx, ny, c;
  };
  std::vector<HalfPlane> hp(m);
  for (int i = 0; i < m; ++i) {
    const Vec2 a = poly.vertices[i];
    const Vec2 d = poly.vertices[(i + 1) % m] - a;
    const double l = norm(d);
    // outward unit normal
    const double nx = d.y / l, ny = -d.x / l;
    hp[i] = {nx, ny, nx * a.x + ny * a.y};
  }
  double best = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        const HalfPlane* rows[3] = {&hp[i], &hp[j], &hp[k]};
        // Solve [nx ny 1] [x y r]^T = c by Cramer's rule.
        auto det3 = [](double a[3][3]) {
          return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                 a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                 a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        };
        double A[3][3], b[3];
        for (int r = 0; r < 3; ++r) {
          A[r][0] = rows[r]->nx;
          A[r][1] = rows[r]->ny;
          A[r][2] = 1.0;
          b[r] = rows[r]->c;
        }
        const double D = det3(A);
        if (std::abs(D) < 1e-14) continue;
        double sol[3];
        for (int c = 0; c < 3; ++c) {
          double B[3][3];
          for (int r = 0; r < 3; ++r)
            for (int cc = 0; cc < 3; ++cc) B[r][cc] = (cc == c) ? b[r] : A[r][cc];
          sol[c] = det3(B) / D;
        }
        bool feasible = sol[2] >= 0.0;
        for (int q = 0; q < m && feasible; ++q) {
          if (hp[q].nx * sol[0] + hp[q].ny * sol[1] + sol[2] > hp[q].c + 1e-12) feasible = false;
        }
        if (feasible) best = std::max(best, sol[2]);
      }
  return best;
}

}  // namespace

double inradius(const Domain& domain) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) return 0.5 * (s.b - s.a);
        else if constexpr (std::is_same_v<T, ConvexPolygon>) return polygon_inradius(s);
        else if constexpr (std::is_same_v<T, Ball>) return s.radius;
        else throw UnsupportedVariantError("in-radius of an exterior domain is infinite");
      },
      domain.shape());
}

double boundary_measure(const Domain& domain) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) return 2.0;
        else if constexpr (std::is_same_v<T, ConvexPolygon>) return polygon_perimeter(s);
        else return unit_sphere_area(s.dim) * std::pow(s.radius, s.dim - 1);
      },
      domain.shape());
}

// ---------------------------------------------------------------------------

BoundaryCondition BoundaryCondition::robin(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("Robin sigma must be finite and >= 0");
  }
  return {sigma};
}

BoundaryPartition::BoundaryPartition(const Domain& domain, std::vector<BoundaryCondition> conditions)
    : conditions_(std::move(conditions)) {
  if (static_cast<int>(conditions_.size()) != domain.piece_count()) {
    throw ParameterError("partition has " + std::to_string(conditions_.size()) +
                         " pieces, domain has " + std::to_string(domain.piece_count()));
  }
  for (const auto& c : conditions_) {
    if (!(c.sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
  }
}

BoundaryPartition BoundaryPartition::uniform(const Domain& domain, BoundaryCondition c) {
  return BoundaryPartition(domain, std::vector<BoundaryCondition>(domain.piece_count(), c));
}

bool BoundaryPartition::has_dirichlet() const {
  return std::any_of(conditions_.begin(), conditions_.end(),
                     [](const auto& c) { return c.is_dirichlet(); });
}

bool BoundaryPartition::all_dirichlet() const {
  return std::all_of(conditions_.begin(), conditions_.end(),
                     [](const auto& c) { return c.is_dirichlet(); });
}

double BoundaryPartition::sigma_max() const {
  double m = 0.0;
  for (const auto& c : conditions_)
    if (!c.is_dirichlet()) m = std::max(m, c.sigma);
  return m;
}

bool BoundaryPartition::sigma_constant() const {
  for (const auto& c : conditions_)
    if (c.sigma != conditions_.front().sigma) return false;
  return true;
}

std::vector<int> BoundaryPartition::dirichlet_pieces() const {
  std::vector<int> ids;
  for (int i = 0; i < size(); ++i)
    if (conditions_[i].is_dirichlet()) ids.push_back(i);
  return ids;
}

std::vector<BoundaryPiece> boundary_pieces(const Domain& domain, const BoundaryPartition& partition) {
  std::vector<BoundaryPiece> out;
  for (int i = 0; i < domain.piece_count(); ++i) {
    std::ostringstream g;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Interval>) g << "endpoint " << (i == 0 ? s.a : s.b);
          else if constexpr (std::is_same_v<T, ConvexPolygon>) {
            const Vec2 a = s.vertices[i];
            const Vec2 b = s.vertices[(i + 1) % s.vertices.size()];
            g << "edge (" << a.x << "," << a.y << ")-(" << b.x << "," << b.y << ")";
          } else g << "sphere r=" << s.radius;
        },
        domain.shape());
    out.push_back({i, g.str(), partition.condition(i)});
  }
  return out;
}

}  // namespace hardy
