#include "hardy/space.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "hardy/errors.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

namespace {

std::atomic<std::uint64_t> next_space_id{1};

Incidence build_incidence(int nodes, const auto& items) {
  Incidence inc;
  inc.offset.assign(nodes + 1, 0);
  for (const auto& it : items)
    for (int k = 0; k < it.count; ++k) inc.offset[it.nodes[k] + 1]++;
  for (int i = 0; i < nodes; ++i) inc.offset[i + 1] += inc.offset[i];
  inc.slot.resize(inc.offset[nodes]);
  std::vector<int> fill(inc.offset.begin(), inc.offset.end() - 1);
  for (std::size_t j = 0; j < items.size(); ++j)
    for (int k = 0; k < items[j].count; ++k) inc.slot[fill[items[j].nodes[k]]++] = static_cast<int>(3 * j + k);
  return inc;
}

Point radial_point(int dim, double r) {
  Point x(dim, 0.0);
  x[0] = r;
  return x;
}

void add_piece(std::vector<int>& v, int piece) {
  if (std::find(v.begin(), v.end(), piece) == v.end()) v.push_back(piece);
}

/// Append 5-point Gauss samples of a two-node segment [x0, x1] in the mesh variable;
/// `element(x)` maps the variable to the volume element and `point(x)` to a sample point.
template <class Elem, class Pt>
void segment_samples(std::vector<Sample>& samples, std::vector<Point>& xs, int n0, int n1, double x0, double x1,
                     Elem element, Pt point) {
  const double half = 0.5 * (x1 - x0);
  for (int q = 0; q < quad::Gauss5::size; ++q) {
    const double xi = 0.5 * (1.0 + quad::Gauss5::nodes[q]);
    const double x = x0 + xi * (x1 - x0);
    Sample s;
    s.nodes = {n0, n1, 0};
    s.shape = {1.0 - xi, xi, 0.0};
    s.count = 2;
    s.base = quad::Gauss5::weights[q] * half * element(x);
    samples.push_back(s);
    xs.push_back(point(x));
  }
}

void check_nodes(const std::vector<double>& nodes, double lo, double hi, const char* what) {
  if (nodes.size() < 3) throw ParameterError(std::string(what) + ": need at least 2 cells");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i + 1] > nodes[i])) throw ParameterError(std::string(what) + ": nodes must increase strictly");
  const double tol = 1e-12 * std::max(1.0, std::abs(hi - lo));
  if (std::abs(nodes.front() - lo) > tol || std::abs(nodes.back() - hi) > tol)
    throw DomainError(std::string(what) + ": mesh does not match the domain");
}

}  // namespace

Space::Space(SpaceKind kind, Domain domain)
    : kind_(kind), domain_(std::move(domain)), bound_p_(std::numeric_limits<double>::quiet_NaN()) {}

void Space::finalize() {
  const int n = node_count();
  node_pieces_.resize(n);
  forced_.resize(n, 0);
  cell_inc_ = build_incidence(n, cells_);
  sample_inc_ = build_incidence(n, samples_);
  bsample_inc_ = build_incidence(n, bsamples_);
  summary_.nodes = n;
  summary_.cells = static_cast<int>(cells_.size());
  id_ = next_space_id.fetch_add(1);
}

void Space::check_exponent(double p) const {
  if (!std::isnan(bound_p_) && p != bound_p_)
    throw ParameterError("space was built for p = " + std::to_string(bound_p_));
}

std::shared_ptr<const Space> Space::interval(const Domain& domain, const Mesh1D& mesh) {
  const auto* iv = domain.as<Interval>();
  if (!iv) throw UnsupportedVariantError("interval space needs an Interval domain");
  check_nodes(mesh.nodes, iv->a, iv->b, "interval space");
  std::shared_ptr<Space> s(new Space(SpaceKind::interval, domain));
  const int n = static_cast<int>(mesh.nodes.size());
  for (double t : mesh.nodes) s->node_x_.push_back({t});
  s->node_pieces_.resize(n);
  s->node_pieces_.front() = {0};
  s->node_pieces_.back() = {1};
  s->summary_ = {"interval", 0, 0, mesh.min_spacing(), 0.0};
  for (int i = 0; i + 1 < n; ++i) {
    const double h = mesh.nodes[i + 1] - mesh.nodes[i];
    s->summary_.max_size = std::max(s->summary_.max_size, h);
    GradCell c;
    c.nodes = {i, i + 1, 0};
    c.grad = {Vec2{-1.0 / h, 0.0}, Vec2{1.0 / h, 0.0}, Vec2{}};
    c.count = 2;
    c.measure = h;
    c.centroid = {0.5 * (mesh.nodes[i] + mesh.nodes[i + 1])};
    s->cells_.push_back(c);
    segment_samples(s->samples_, s->sample_x_, i, i + 1, mesh.nodes[i], mesh.nodes[i + 1],
                    [](double) { return 1.0; }, [](double x) { return Point{x}; });
  }
  for (int end = 0; end < 2; ++end) {
    BoundarySample b;
    b.nodes = {end == 0 ? 0 : n - 1, 0, 0};
    b.shape = {1.0, 0.0, 0.0};
    b.count = 1;
    b.base = 1.0;
    b.piece_id = end;
    s->bsamples_.push_back(b);
  }
  s->finalize();
  return s;
}

std::shared_ptr<const Space> Space::triangles(const Domain& domain, const TriMesh& mesh) {
  const auto* poly = domain.as<ConvexPolygon>();
  if (!poly) throw UnsupportedVariantError("triangle space needs a ConvexPolygon domain");
  if (mesh.triangles.empty()) throw ParameterError("triangle space: empty mesh");
  const double area = polygon_area(*poly);
  if (std::abs(mesh.total_area() - area) > 1e-9 * area)
    throw DomainError("triangle space: mesh does not cover the polygon");
  std::shared_ptr<Space> s(new Space(SpaceKind::triangles, domain));
  const int n = static_cast<int>(mesh.vertices.size());
  for (const auto& v : mesh.vertices) s->node_x_.push_back({v.x, v.y});
  s->node_pieces_.resize(n);
  double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec2 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
    const double twice = cross(b - a, c - a);
    if (!(twice > 0.0)) throw DomainError("triangle space: non-positive triangle orientation");
    const double A = 0.5 * twice;
    GradCell cell;
    cell.nodes = {t[0], t[1], t[2]};
    cell.grad = {Vec2{(b.y - c.y) / twice, (c.x - b.x) / twice}, Vec2{(c.y - a.y) / twice, (a.x - c.x) / twice},
                 Vec2{(a.y - b.y) / twice, (b.x - a.x) / twice}};
    cell.count = 3;
    cell.measure = A;
    cell.centroid = {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
    s->cells_.push_back(cell);
    for (const Vec2 e : {b - a, c - b, a - c}) {
      hmin = std::min(hmin, norm(e));
      hmax = std::max(hmax, norm(e));
    }
    for (int q = 0; q < quad::Triangle7::size; ++q) {
      const auto& l = quad::Triangle7::barycentric[q];
      Sample smp;
      smp.nodes = {t[0], t[1], t[2]};
      smp.shape = {l[0], l[1], l[2]};
      smp.count = 3;
      smp.base = quad::Triangle7::weights[q] * A;
      s->samples_.push_back(smp);
      s->sample_x_.push_back({l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y});
    }
  }
  for (const auto& e : mesh.boundary_edges) {
    if (e.piece_id < 0 || e.piece_id >= domain.piece_count())
      throw DomainError("triangle space: boundary edge tagged with an unknown piece");
    add_piece(s->node_pieces_[e.v0], e.piece_id);
    add_piece(s->node_pieces_[e.v1], e.piece_id);
    const double len = norm(mesh.vertices[e.v1] - mesh.vertices[e.v0]);
    for (int q = 0; q < quad::Gauss5::size; ++q) {
      const double xi = 0.5 * (1.0 + quad::Gauss5::nodes[q]);
      BoundarySample b;
      b.nodes = {e.v0, e.v1, 0};
      b.shape = {1.0 - xi, xi, 0.0};
      b.count = 2;
      b.base = quad::Gauss5::weights[q] * 0.5 * len;
      b.piece_id = e.piece_id;
      s->bsamples_.push_back(b);
    }
  }
  s->summary_ = {"triangles", 0, 0, hmin, hmax};
  s->finalize();
  return s;
}

std::shared_ptr<const Space> Space::ball_radial(const Domain& domain, const Mesh1D& mesh) {
  const auto* ball = domain.as<Ball>();
  if (!ball) throw UnsupportedVariantError("ball space needs a Ball domain");
  check_nodes(mesh.nodes, 0.0, ball->radius, "ball space");
  std::shared_ptr<Space> s(new Space(SpaceKind::ball_radial, domain));
  const int dim = ball->dim;
  const double S = unit_sphere_area(dim);
  const int n = static_cast<int>(mesh.nodes.size());
  for (double r : mesh.nodes) s->node_x_.push_back(radial_point(dim, r));
  s->node_pieces_.resize(n);
  s->node_pieces_.back() = {0};
  s->summary_ = {"ball_radial", 0, 0, mesh.min_spacing(), 0.0};
  for (int i = 0; i + 1 < n; ++i) {
    const double r0 = mesh.nodes[i], r1 = mesh.nodes[i + 1], h = r1 - r0;
    s->summary_.max_size = std::max(s->summary_.max_size, h);
    GradCell c;
    c.nodes = {i, i + 1, 0};
    c.grad = {Vec2{-1.0 / h, 0.0}, Vec2{1.0 / h, 0.0}, Vec2{}};
    c.count = 2;
    c.measure = S * (std::pow(r1, dim) - std::pow(r0, dim)) / dim;
    c.centroid = radial_point(dim, 0.5 * (r0 + r1));
    s->cells_.push_back(c);
    segment_samples(
        s->samples_, s->sample_x_, i, i + 1, r0, r1, [&](double r) { return S * std::pow(r, dim - 1); },
        [&](double r) { return radial_point(dim, r); });
  }
  BoundarySample b;
  b.nodes = {n - 1, 0, 0};
  b.shape = {1.0, 0.0, 0.0};
  b.count = 1;
  b.base = S * std::pow(ball->radius, dim - 1);
  b.piece_id = 0;
  s->bsamples_.push_back(b);
  s->finalize();
  return s;
}

std::shared_ptr<const Space> Space::exterior(const Domain& domain, const RadialLogMesh& mesh, double p) {
  const auto* ext = domain.as<ExteriorBall>();
  if (!ext) throw UnsupportedVariantError("exterior space needs an ExteriorBall domain");
  if (!(p > 1.0)) throw ParameterError("p must exceed 1");
  if (std::abs(mesh.radius - ext->radius) > 1e-12 * ext->radius)
    throw DomainError("exterior space: mesh radius does not match the domain");
  check_nodes(mesh.s_nodes, 0.0, std::log(ext->rho_max / ext->radius), "exterior space");
  std::shared_ptr<Space> s(new Space(SpaceKind::exterior_log, domain));
  s->bound_p_ = p;
  const int dim = ext->dim;
  const double R = ext->radius;
  const double S = unit_sphere_area(dim);
  const double k = dim - p;
  const int n = static_cast<int>(mesh.s_nodes.size());
  for (double sv : mesh.s_nodes) s->node_x_.push_back(radial_point(dim, R * std::exp(sv)));
  s->node_pieces_.resize(n);
  s->node_pieces_.front() = {0};
  s->summary_ = {"exterior_log", 0, 0, std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i + 1 < n; ++i) {
    const double s0 = mesh.s_nodes[i], s1 = mesh.s_nodes[i + 1], ds = s1 - s0;
    s->summary_.min_size = std::min(s->summary_.min_size, ds);
    s->summary_.max_size = std::max(s->summary_.max_size, ds);
    GradCell c;
    c.nodes = {i, i + 1, 0};
    c.grad = {Vec2{-1.0 / ds, 0.0}, Vec2{1.0 / ds, 0.0}, Vec2{}};
    c.count = 2;
    // |S| R^{n-p} * integral of e^{(n-p)s} over the cell.
    const double integral = (k == 0.0) ? ds : std::exp(k * s0) * std::expm1(k * ds) / k;
    c.measure = S * std::pow(R, k) * integral;
    c.centroid = radial_point(dim, R * std::exp(0.5 * (s0 + s1)));
    s->cells_.push_back(c);
    segment_samples(
        s->samples_, s->sample_x_, i, i + 1, s0, s1,
        [&](double sv) { return S * std::pow(R, dim) * std::exp(dim * sv); },
        [&](double sv) { return radial_point(dim, R * std::exp(sv)); });
  }
  s->forced_.assign(n, 0);
  if (p > dim) {
    // Constant continuation beyond rho_max: integral of r^{n-1-p} from rho to infinity.
    const double rho = ext->rho_max;
    Sample tail;
    tail.nodes = {n - 1, 0, 0};
    tail.shape = {1.0, 0.0, 0.0};
    tail.count = 1;
    tail.base = S * std::pow(rho, dim) / (p - dim);
    s->samples_.push_back(tail);
    s->sample_x_.push_back(radial_point(dim, rho));
  } else {
    s->forced_.back() = 1;
  }
  BoundarySample b;
  b.nodes = {0, 0, 0};
  b.shape = {1.0, 0.0, 0.0};
  b.count = 1;
  b.base = S * std::pow(R, dim - 1);
  b.piece_id = 0;
  s->bsamples_.push_back(b);
  s->finalize();
  return s;
}

int Field::free_count() const {
  return static_cast<int>(std::count(pinned.begin(), pinned.end(), 0));
}

void Field::enforce_pins() {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (pinned[i]) values[i] = 0.0;
}

Field make_field(const SpacePtr& space, const BoundaryPartition& partition) {
  if (partition.size() != space->domain().piece_count())
    throw ParameterError("partition does not match the space's domain");
  Field f;
  f.space = space;
  const int n = space->node_count();
  f.values.assign(n, 0.0);
  f.pinned.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (space->forced_pins()[i]) f.pinned[i] = 1;
    for (int piece : space->node_pieces()[i])
      if (partition.condition(piece).is_dirichlet()) f.pinned[i] = 1;
  }
  return f;
}

}  // namespace hardy
