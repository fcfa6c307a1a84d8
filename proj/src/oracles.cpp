#include "hardy/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/errors.hpp"
#include "hardy/exterior.hpp"
#include "hardy/functional.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

void Profile1D::validate() const {
  if (breakpoints.size() < 2 || values.size() != breakpoints.size())
    throw ParameterError("profile needs >= 2 breakpoints and one value per breakpoint");
  if (breakpoints.front() != 0.0) throw ParameterError("profile must start at t = 0");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i + 1] > breakpoints[i])) throw ParameterError("profile breakpoints must increase");
  for (double v : values)
    if (!std::isfinite(v)) throw ParameterError("profile values must be finite");
}

Sides lemma1_sides(const Profile1D& profile, double sigma, double p) {
  profile.validate();
  const double cp = cp_constant(p);
  const double alpha = alpha_at(p, sigma);
  const bool dirichlet = sigma == kInfinity;
  if (dirichlet && profile.values.front() != 0.0)
    throw DomainError("a Dirichlet end requires u(0) = 0");

  Sides s;
  const auto& t = profile.breakpoints;
  const auto& u = profile.values;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    s.lhs += std::pow(std::abs((u[i + 1] - u[i]) / (t[i + 1] - t[i])), p) * (t[i + 1] - t[i]);
  if (!dirichlet) s.lhs += sigma * std::pow(std::abs(u.front()), p);
  if (alpha == kInfinity) return s;  // both weights vanish

  double weighted = 0.0, plain = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double t0 = t[i], t1 = t[i + 1], u0 = u[i], u1 = u[i + 1];
    auto val = [&](double x) { return u0 + (u1 - u0) * (x - t0) / (t1 - t0); };
    weighted += quad::adaptive_gauss5(
        [&](double x) { return std::pow(std::abs(val(x)), p) * std::pow(x + alpha, -p); }, t0, t1, 1e-14);
    plain += quad::adaptive_gauss5([&](double x) { return std::pow(std::abs(val(x)), p); }, t0, t1, 1e-14);
  }
  s.rhs = cp * weighted + (p - 1.0) * cp * std::pow(profile.length() + alpha, -p) * plain;
  return s;
}

double theorem2_bound(double p, double r_in, double sigma_max) {
  const double cp = cp_constant(p);
  if (!(r_in > 0.0)) throw ParameterError("in-radius must be > 0");
  if (!(sigma_max > 0.0)) throw ParameterError("sigma_max must be > 0");
  if (sigma_max == kInfinity) return cp;
  return cp * (1.0 + std::pow(1.0 + p * r_in * std::pow(sigma_max, 1.0 / (p - 1.0)), -p));
}

double hardy_rhs_full(const Field& field, const HardyWeight& weight, double p, double r_in) {
  if (!(r_in > 0.0)) throw ParameterError("in-radius must be > 0");
  const double cp = cp_constant(p);
  const double main = weighted_norm_pp(field, weight, p, Exec::serial);
  const auto& samples = field.space->samples();
  double extra = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double alpha = weight.records[i].alpha;
    if (alpha == kInfinity) continue;
    extra += samples[i].base * std::pow(r_in + alpha, -p) *
             kernels::abs_pow(kernels::sample_value(samples[i], field.values), p);
  }
  return cp * main + (p - 1.0) * cp * extra;
}

namespace {

double euclid_dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Distance from the anchor to boundary piece `piece`.
double distance_to_piece(const Domain& dom, const Point& y, int piece) {
  if (const auto* iv = dom.as<Interval>()) return std::abs(y[0] - (piece == 0 ? iv->a : iv->b));
  if (const auto* poly = dom.as<ConvexPolygon>()) return edge_segment_distance(*poly, piece, Vec2{y[0], y[1]});
  throw UnsupportedVariantError("u_eps is available on intervals and polygons");
}

}  // namespace

Field u_eps_field(const SpacePtr& space, const BoundaryPartition& partition, const Point& anchor, double r,
                  double eps, double p) {
  const Domain& dom = space->domain();
  if (!(p > 1.0)) throw ParameterError("p must exceed 1");
  if (!(eps > 0.0) || !(r > 0.0)) throw ParameterError("r and eps must be positive");
  if (!(2.0 * eps < inradius(dom))) throw ParameterError("2 eps must stay below the in-radius");
  if (static_cast<int>(anchor.size()) != dom.ambient_dim()) throw ParameterError("anchor has the wrong dimension");
  if (distance_to_boundary(dom, anchor) > 1e-12 * dom.scale()) throw DomainError("anchor is not a boundary point");
  bool on_gamma = false;
  for (int piece = 0; piece < partition.size(); ++piece) {
    const double d = distance_to_piece(dom, anchor, piece);
    if (partition.condition(piece).is_dirichlet()) {
      if (d <= 1e-12 * dom.scale()) on_gamma = true;
    } else if (d <= r + eps) {
      throw DomainError("the ball around the anchor reaches a Robin piece");
    }
  }
  if (!on_gamma) throw DomainError("anchor does not lie on the Dirichlet part");

  Field f = make_field(space, partition);
  const double inv_p = 1.0 / p;
  for (int i = 0; i < space->node_count(); ++i) {
    if (f.pinned[i]) continue;
    const Point& x = space->node_coordinates()[i];
    const double delta = distance_to_boundary(dom, x);
    const double rho = euclid_dist(x, anchor);
    double fe;
    if (rho <= r) fe = eps;
    else if (rho >= r + eps) fe = inv_p;
    else fe = eps + (inv_p - eps) * (rho - r) / eps;
    const double expo = fe + 1.0 - inv_p;
    double v = 0.0;
    if (delta <= eps) v = std::pow(delta, expo);
    else if (delta <= 2.0 * eps) v = std::pow(eps, expo) * (2.0 * eps - delta) / eps;
    f.values[i] = v;
  }
  return f;
}

double ball_upper_bound(int n, double p, double sigma, double R) {
  if (n < 1) throw ParameterError("dimension must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be positive and finite");
  if (!(R > 0.0)) throw ParameterError("R must be > 0");
  const double cp = cp_constant(p);
  const double alpha = alpha_at(p, sigma);
  const double integral =
      quad::adaptive_gauss5([&](double s) { return std::pow(s, n - 1) / (R + alpha - s); }, 0.0, R, 1e-12);
  return cp + sigma * std::pow(alpha, p - 1.0) * std::pow(R, n - 1) / integral;
}

SigmaProbe sigma_limit_probe(const Domain& domain, double p, std::vector<double> sigmas, const MeshParams& mesh,
                             const SolverConfig& config) {
  if (!domain.is_bounded()) throw UnsupportedVariantError("sigma probe needs a bounded domain");
  if (sigmas.empty()) throw ParameterError("sigma list is empty");
  for (double s : sigmas)
    if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("probe sigmas must be positive and finite");
  std::sort(sigmas.begin(), sigmas.end());
  const double rin = inradius(domain);
  SigmaProbe probe;
  for (double s : sigmas) {
    const auto part = BoundaryPartition::uniform(domain, BoundaryCondition::robin(s));
    const auto space = default_space(domain, part, p, mesh);
    const auto rep = minimize_quotient(space, part, p, config);
    probe.rows.push_back({s, rep.lambda_estimate, theorem2_bound(p, rin, s), rep.converged});
  }
  probe.strictly_decreasing = true;
  for (std::size_t i = 0; i + 1 < probe.rows.size(); ++i)
    if (!(probe.rows[i + 1].lambda < probe.rows[i].lambda)) probe.strictly_decreasing = false;
  return probe;
}

Certificates analytic_certificates(const Domain& domain, const BoundaryPartition& partition, double p) {
  Certificates c;
  const double cp = cp_constant(p);
  if (const auto* ext = domain.as<ExteriorBall>()) {
    const int n = ext->dim;
    const double sigma = partition.sigma(0);
    c.notes.push_back("radial trial functions only: the radial infimum bounds the full infimum from above");
    if (p > n) {
      if (sigma == kInfinity) {
        c.lower = std::pow(p - n, p) / std::pow(p, p);
        c.lower_source = "robin_exterior_constant (sigma = inf branch)";
      } else if (sigma > 0.0) {
        c.lower = robin_exterior_constant(n, p, sigma, ext->radius);
        c.lower_source = "robin_exterior_constant";
      }
    } else if (n > p) {
      c.lower = classical_exterior_constant(n, p);
      c.lower_source = "classical_exterior_constant";
    } else {
      c.notes.push_back("p = n: no positive Hardy constant exists on the exterior of a ball");
    }
    return c;
  }

  const double rin = inradius(domain);
  c.lower = cp;
  c.lower_source = "C_p";
  if (partition.has_dirichlet()) {
    c.upper = cp;
    c.upper_source = "C_p (sharp when the Dirichlet part is nonempty)";
  } else if (partition.sigma_max() > 0.0) {
    c.lower = theorem2_bound(p, rin, partition.sigma_max());
    c.lower_source = "theorem2_bound";
    if (const auto* ball = domain.as<Ball>(); ball && partition.sigma_constant()) {
      c.upper = ball_upper_bound(ball->dim, p, partition.sigma(0), ball->radius);
      c.upper_source = "ball_upper_bound";
    }
  }
  if (domain.as<ConvexPolygon>())
    c.notes.push_back("polygon is convex but not C2: the certificates are applied to a desk-scale approximant");
  if (domain.as<Ball>()) c.notes.push_back("ball solved over radial profiles only");
  return c;
}

}  // namespace hardy
