#include "hardy/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>

#include "hardy/errors.hpp"
#include "hardy/functional.hpp"
#include "hardy/oracles.hpp"
#include "hardy/weights.hpp"

namespace hardy {

void SolverConfig::validate() const {
  if (max_iter < 0) throw ParameterError("max_iter must be >= 0");
  if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be > 0");
  if (window < 1) throw ParameterError("window must be >= 1");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ParameterError("shrink must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw ParameterError("sufficient-decrease constant must lie in (0, 1)");
  if (!(initial_step > 0.0) || !(max_step >= initial_step)) throw ParameterError("invalid step bounds");
  if (restarts < 0) throw ParameterError("restarts must be >= 0");
  if (!(weight_scale > 0.0)) throw ParameterError("weight_scale must be > 0");
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// P = p (K_u - theta M_u) on the free nodes, where K_u and M_u are the
/// stiffness and mass matrices frozen at the current iterate (the exact
/// Hessian pattern of the p = 2 quotient). With theta = 0 a unit step is one
/// nonlinear inverse-iteration step.
class Preconditioner {
 public:
  Preconditioner(const Assembly& a, std::vector<int> free_of_node, int nfree)
      : a_(a), fidx_(std::move(free_of_node)), nfree_(nfree) {}

  bool build(std::span<const double> u, double theta) {
    const auto& sp = *a_.space;
    const double p = a_.p;
    trip_.clear();
    double gx, gy;
    std::vector<double> g2s(sp.cells().size());
    for (std::size_t ci = 0; ci < g2s.size(); ++ci) g2s[ci] = kernels::cell_grad_sq(sp.cells()[ci], u, gx, gy);
    // Much coarser than the gradient regularisation: only the conditioning matters here.
    const double eps2 = p == 2.0 ? 0.0 : 1e12 * kernels::regularisation_eps2(a_, g2s);
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, std::abs(v));
    const double ueps2 = (1e-6 * umax) * (1e-6 * umax) + 1e-300;

    for (std::size_t ci = 0; ci < sp.cells().size(); ++ci) {
      const auto& c = sp.cells()[ci];
      const double g2 = g2s[ci];
      const double w = p * a_.cell_measure[ci] * (p == 2.0 ? 1.0 : std::pow(g2 + eps2, 0.5 * p - 1.0));
      for (int k = 0; k < c.count; ++k)
        for (int l = 0; l < c.count; ++l) add(c.nodes[k], c.nodes[l], w * dot(c.grad[k], c.grad[l]));
    }
    auto samples = [&](const auto& list, const std::vector<double>& factor, double scale) {
      for (std::size_t si = 0; si < list.size(); ++si) {
        if (factor[si] == 0.0) continue;
        const auto& s = list[si];
        const double v = kernels::sample_value(s, u);
        const double w = scale * p * factor[si] * (p == 2.0 ? 1.0 : std::pow(v * v + ueps2, 0.5 * p - 1.0));
        for (int k = 0; k < s.count; ++k)
          for (int l = 0; l < s.count; ++l) add(s.nodes[k], s.nodes[l], w * s.shape[k] * s.shape[l]);
      }
    };
    samples(sp.boundary_samples(), a_.boundary_factor, 1.0);
    if (theta != 0.0) samples(sp.samples(), a_.volume_factor, -theta);

    // Diagonal floor keeps flat regions (p > 2, zero gradient) factorable.
    std::vector<double> diag(nfree_, 0.0);
    for (const auto& t : trip_)
      if (t.row() == t.col()) diag[t.row()] += t.value();
    // Relative to each row: graded meshes span many orders of magnitude.
    double dmin = kInfinity;
    for (double d : diag)
      if (d > 0.0) dmin = std::min(dmin, d);
    if (dmin == kInfinity) dmin = 1.0;
    for (int i = 0; i < nfree_; ++i) trip_.emplace_back(i, i, diag[i] > 0.0 ? 1e-12 * diag[i] : 1e-12 * dmin);

    P_.resize(nfree_, nfree_);
    P_.setFromTriplets(trip_.begin(), trip_.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(P_);
      analyzed_ = true;
    }
    ldlt_.factorize(P_);
    if (ldlt_.info() != Eigen::Success) return false;
    const Vec D = ldlt_.vectorD();
    return D.size() == 0 || (D.minCoeff() > 0.0 && D.allFinite());
  }

  Vec solve(const Vec& r) const { return ldlt_.solve(r); }

 private:
  void add(int i, int j, double v) {
    const int fi = fidx_[i], fj = fidx_[j];
    if (fi >= 0 && fj >= 0) trip_.emplace_back(fi, fj, v);
  }

  const Assembly& a_;
  std::vector<int> fidx_;
  int nfree_;
  std::vector<Eigen::Triplet<double>> trip_;
  SpMat P_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  bool analyzed_ = false;
};

struct StartResult {
  std::vector<double> u;
  std::vector<double> history;
  Terms terms;
  bool converged = false;
  std::string stop_reason;
};

double quotient_of(const Terms& t) { return t.numerator() / t.norm; }

void normalise(std::vector<double>& u, Terms& t, double p) {
  const double s = std::pow(t.norm, -1.0 / p);
  for (auto& v : u) v *= s;
  const double sp = std::pow(s, p);
  t.energy *= sp;
  t.boundary *= sp;
  t.norm *= sp;
}

StartResult run_start(const Assembly& a, const std::vector<char>& pinned, std::vector<double> u, double theta_hint,
                      const SolverConfig& cfg) {
  const int n = static_cast<int>(u.size());
  std::vector<int> fidx(n, -1), node_of;
  for (int i = 0; i < n; ++i)
    if (!pinned[i]) {
      fidx[i] = static_cast<int>(node_of.size());
      node_of.push_back(i);
    }
  const int nfree = static_cast<int>(node_of.size());
  for (int i = 0; i < n; ++i)
    if (pinned[i]) u[i] = 0.0;

  StartResult res;
  Terms t = kernels::evaluate(a, u, cfg.exec);
  if (!(t.norm > 0.0) || !std::isfinite(t.norm)) throw DegenerateFieldError("initial field has zero weighted norm");
  normalise(u, t, a.p);
  double q = quotient_of(t);
  res.history.push_back(q);

  Preconditioner pre(a, fidx, nfree);
  std::vector<double> gn(n), gd(n), trial(n);
  Vec r(nfree), d(nfree);
  double tau_prev = 0.5 * cfg.initial_step;
  const bool shifted = a.p == 2.0;
  double lo = std::max(theta_hint, 0.0), hi = kInfinity;
  res.stop_reason = "max_iter";
  for (int it = 0; it < cfg.max_iter; ++it) {
    kernels::gradients(a, u, gn, gd, cfg.exec);
    for (int j = 0; j < nfree; ++j) r[j] = gn[node_of[j]] - q * gd[node_of[j]];
    if (!r.allFinite()) throw NumericalError("non-finite gradient");
    const double rnorm = r.norm();
    if (rnorm == 0.0) {
      res.converged = true;
      res.stop_reason = "stationary";
      break;
    }
    bool have = false;
    if (cfg.precondition) {
      auto try_shift = [&](double theta) {
        if (!pre.build(u, theta)) return false;
        d = -pre.solve(r);
        have = d.allFinite() && d.dot(r) < 0.0;
        return true;
      };
      if (shifted) {
        // For p = 2 the shifted matrix is positive definite iff theta lies below
        // the discrete minimum, so each factorisation brackets it. Shifting halfway
        // to the current quotient accelerates the inverse iteration.
        const double target = lo + 0.5 * (std::min(q, hi) - lo);
        if (target > lo && try_shift(target)) lo = target;
        else {
          hi = std::min(hi, target);
          if (!try_shift(lo)) lo = 0.0;
        }
      }
      if (!have) try_shift(0.0);
    }
    if (!have) d = -r / rnorm;

    double slope = 0.0, tau = 0.0;
    Terms tt;
    auto line_search = [&]() {
      slope = d.dot(r);  // derivative of the quotient along d (norm is 1)
      tau = std::min(2.0 * tau_prev, cfg.max_step);
      for (int ls = 0; ls < 80; ++ls) {
        for (int i = 0; i < n; ++i) trial[i] = u[i];
        for (int j = 0; j < nfree; ++j) trial[node_of[j]] += tau * d[j];
        tt = kernels::evaluate(a, trial, cfg.exec);
        if (!std::isfinite(tt.energy) || !std::isfinite(tt.boundary) || !std::isfinite(tt.norm))
          throw NumericalError("non-finite quotient during line search");
        if (tt.norm > 0.0 && quotient_of(tt) <= q + cfg.armijo * tau * slope) return true;
        tau *= cfg.shrink;
      }
      return false;
    };
    bool accepted = line_search();
    if (!accepted && have) {
      d = -r / rnorm;
      accepted = line_search();
    }
    if (!accepted) {
      // No representable decrease left along the direction.
      res.stop_reason = "line_search_stall";
      const std::size_t k = res.history.size() - 1;
      const std::size_t w = std::min<std::size_t>(k, cfg.window);
      // Converged when the first-order decrease left is below the tolerance, or
      // the recent history is already flat.
      const double scale = std::abs(res.history[k]);
      res.converged = std::abs(slope) <= cfg.rel_tol * scale ||
                      (k >= 1 && res.history[k - 1] - res.history[k] <= cfg.rel_tol * scale) ||
                      (w > 0 && res.history[k - w] - res.history[k] <= 1e-8 * scale);
      break;
    }
    tau_prev = tau;
    u.swap(trial);
    t = tt;
    normalise(u, t, a.p);
    q = std::min(quotient_of(t), q);
    res.history.push_back(q);
    const std::size_t k = res.history.size() - 1;
    if (k >= static_cast<std::size_t>(cfg.window)) {
      const double drop = res.history[k - cfg.window] - res.history[k];
      if (drop <= cfg.rel_tol * std::abs(res.history[k])) {
        res.converged = true;
        res.stop_reason = "rel_tol";
        break;
      }
    }
  }
  res.u = std::move(u);
  res.terms = t;
  return res;
}

}  // namespace

Field initial_field(const SpacePtr& space, const BoundaryPartition& partition, double p, const SolverConfig& config) {
  Field f = make_field(space, partition);
  const int n = space->node_count();
  switch (config.init) {
    case InitKind::ones:
      std::fill(f.values.begin(), f.values.end(), 1.0);
      break;
    case InitKind::custom:
      if (static_cast<int>(config.custom.size()) != n) throw ParameterError("custom initial field has wrong size");
      f.values = config.custom;
      break;
    case InitKind::delta_power: {
      const Domain& dom = space->domain();
      if (const auto* ext = dom.as<ExteriorBall>()) {
        const double smax = std::log(ext->rho_max / ext->radius);
        for (int i = 0; i < n; ++i) {
          const double r = space->node_radius(i);
          double v = std::pow(r / ext->radius, (p - ext->dim) / p);
          if (space->forced_pins().back()) v *= std::max(0.0, 1.0 - std::log(r / ext->radius) / smax);
          f.values[i] = v;
        }
      } else {
        for (int i = 0; i < n; ++i) {
          const Point& x = space->node_coordinates()[i];
          const double delta = distance_to_boundary(dom, x);
          const double alpha = alpha_at(p, partition.sigma(boundary_projection(dom, x).piece_id));
          f.values[i] = alpha == kInfinity ? 1.0 : std::pow(delta + alpha, (p - 1.0) / p);
        }
      }
      break;
    }
  }
  for (double v : f.values)
    if (!std::isfinite(v)) throw ParameterError("initial field is not finite");
  f.enforce_pins();
  return f;
}

QuotientReport minimize_quotient(const SpacePtr& space, const BoundaryPartition& partition, double p,
                                 const SolverConfig& config) {
  config.validate();
  if (!(p > 1.0)) throw ParameterError("p must exceed 1");
  Field f0 = initial_field(space, partition, p, config);
  if (f0.free_count() == 0) throw DegenerateFieldError("all nodes are pinned");
  const HardyWeight weight = build_weight(*space, partition, p);
  Assembly a = make_assembly(space, partition, weight, p);
  if (config.weight_scale != 1.0)
    for (auto& v : a.volume_factor) v *= config.weight_scale;

  const Certificates cert = analytic_certificates(space->domain(), partition, p);
  // Shift toward the analytic lower bound only where K - theta M is known to stay definite.
  const double theta = (p == 2.0 && cert.lower && *cert.lower > 0.0) ? 0.9 * *cert.lower / config.weight_scale : 0.0;

  QuotientReport rep;
  StartResult best;
  bool have_best = false;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  for (int s = 0; s <= config.restarts; ++s) {
    std::vector<double> u0 = f0.values;
    if (s > 0)
      for (auto& v : u0) v *= 1.0 + jitter(rng);
    StartResult r = run_start(a, f0.pinned, std::move(u0), theta, config);
    rep.start_estimates.push_back(r.history.back());
    if (!have_best || r.history.back() < best.history.back()) {
      best = std::move(r);
      have_best = true;
    }
  }

  rep.history = best.history;
  rep.lambda_estimate = best.history.back();
  rep.iterations = static_cast<int>(best.history.size()) - 1;
  rep.converged = best.converged;
  rep.stop_reason = best.stop_reason;
  rep.terms = best.terms;
  rep.mesh = space->summary();
  rep.field = f0;
  rep.field.values = best.u;
  if (config.restarts == 0) rep.start_estimates.clear();

  rep.analytic_lower = cert.lower;
  rep.analytic_upper = cert.upper;
  rep.lower_source = cert.lower_source;
  rep.notes = cert.notes;
  rep.notes.push_back("estimate is the quotient of an explicit piecewise-linear field: an upper bound for the "
                      "discrete problem, never a lower bound for the continuum constant");
  if (partition.has_dirichlet())
    rep.notes.push_back("no minimiser exists when part of the boundary is Dirichlet; the continuum infimum is "
                        "approached only under mesh refinement");
  if (weight.degenerate) rep.notes.push_back("a sigma = 0 piece gives alpha = +inf: the weight vanishes on its fibres");
  if (cert.lower && rep.lambda_estimate < *cert.lower - 1e-6) {
    rep.violation = true;
    rep.notes.push_back("certificate violation: estimate below the analytic lower bound (quadrature or mesh fault)");
  }
  return rep;
}

double local_gradient_energy(const Field& field, const std::function<bool(const Point&)>& region, double p) {
  if (!field.space) throw ParameterError("field has no space");
  field.space->check_exponent(p);
  double e = 0.0, gx, gy;
  for (const auto& c : field.space->cells())
    if (region(c.centroid)) e += c.measure * kernels::pow_half(kernels::cell_grad_sq(c, field.values, gx, gy), p);
  return e;
}

namespace {

/// Endpoints that receive grading: Dirichlet ends and Robin ends whose alpha is
/// small against the in-radius. Returns the smallest cell requested.
std::vector<int> grading_targets(const Domain& dom, const BoundaryPartition& part, double p, const MeshParams& m,
                                 double& min_cell) {
  const double rin = inradius(dom);
  const double L = dom.scale();
  // Keep delta^-p far from overflow at the quadrature points of the first cell.
  const double floor = std::pow(10.0, -250.0 / p) * L;
  std::vector<int> out;
  min_cell = kInfinity;
  for (int i = 0; i < part.size(); ++i) {
    const double alpha = alpha_at(p, part.sigma(i));
    if (alpha == 0.0) {
      out.push_back(i);
      min_cell = std::min(min_cell, std::max(m.min_cell * L, floor));
    } else if (alpha < 0.25 * rin) {
      out.push_back(i);
      min_cell = std::min(min_cell, std::max({m.min_cell * L, floor, 0.01 * alpha}));
    }
  }
  return out;
}

/// Smallest cell that still resolves distances to endpoint e in double precision
/// (relative error of delta around 1e-7).
double resolvable_cell(double e, double min_cell) { return std::max(min_cell, 1e-9 * std::abs(e)); }

Mesh1D graded_interval(const Interval& iv, const std::vector<int>& targets, int n, double ratio, double min_cell) {
  if (targets.empty()) return build_interval_mesh(iv, n, 1.0, {});
  if (targets.size() == 1) {
    const double e = targets[0] == 0 ? iv.a : iv.b;
    const double r = ratio > 0.0 ? ratio : grade_ratio_for_min_cell(iv, n, 1, resolvable_cell(e, min_cell));
    return build_interval_mesh(iv, n, r, targets);
  }
  // Both ends: grade each half on its own, since the attainable cell differs per end.
  const double mid = 0.5 * (iv.a + iv.b);
  const int nl = n / 2, nr = n - nl;
  const Interval left{iv.a, mid}, right{mid, iv.b};
  const double rl = ratio > 0.0 ? ratio : grade_ratio_for_min_cell(left, nl, 1, resolvable_cell(iv.a, min_cell));
  const double rr = ratio > 0.0 ? ratio : grade_ratio_for_min_cell(right, nr, 1, resolvable_cell(iv.b, min_cell));
  Mesh1D m = build_interval_mesh(left, nl, rl, {0});
  const Mesh1D hi = build_interval_mesh(right, nr, rr, {1});
  m.nodes.insert(m.nodes.end(), hi.nodes.begin() + 1, hi.nodes.end());
  return m;
}

std::vector<double> interpolate_1d(const std::vector<double>& xs, const std::vector<double>& v,
                                   const std::vector<double>& at) {
  std::vector<double> out(at.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < at.size(); ++i) {
    while (j + 2 < xs.size() && xs[j + 1] < at[i]) ++j;
    const double x0 = xs[j], x1 = xs[j + 1];
    const double t = std::clamp((at[i] - x0) / (x1 - x0), 0.0, 1.0);
    out[i] = (1.0 - t) * v[j] + t * v[j + 1];
  }
  return out;
}

}  // namespace

SpacePtr default_space(const Domain& domain, const BoundaryPartition& partition, double p, const MeshParams& mesh) {
  if (partition.size() != domain.piece_count()) throw ParameterError("partition does not match the domain");
  if (const auto* iv = domain.as<Interval>()) {
    double min_cell;
    const auto targets = grading_targets(domain, partition, p, mesh, min_cell);
    return Space::interval(domain, graded_interval(*iv, targets, mesh.n, mesh.grade_ratio, min_cell));
  }
  if (const auto* poly = domain.as<ConvexPolygon>()) {
    double min_cell;
    const auto targets = grading_targets(domain, partition, p, mesh, min_cell);
    const double depth = mesh.grade_depth >= 0.0 ? mesh.grade_depth : 0.25 * inradius(domain);
    return Space::triangles(domain, build_polygon_mesh(*poly, mesh.h, targets, depth));
  }
  if (const auto* ball = domain.as<Ball>()) {
    double min_cell;
    auto targets = grading_targets(domain, partition, p, mesh, min_cell);
    const Interval radial{0.0, ball->radius};
    if (!targets.empty()) targets = {1};
    return Space::ball_radial(domain, graded_interval(radial, targets, mesh.n, mesh.grade_ratio, min_cell));
  }
  const auto& ext = std::get<ExteriorBall>(domain.shape());
  return Space::exterior(domain, build_radial_mesh(ext, mesh.n), p);
}

std::vector<SequenceLevel> minimizing_sequence(const Domain& domain, const BoundaryPartition& partition, double p,
                                               int levels, const MeshParams& mesh, const SolverConfig& config) {
  if (levels < 2) throw ParameterError("a minimizing sequence needs at least 2 levels");
  std::vector<SequenceLevel> out;
  double min_cell;
  const auto targets = domain.is_bounded() ? grading_targets(domain, partition, p, mesh, min_cell) : std::vector<int>{};

  // Level 0.
  SpacePtr space = default_space(domain, partition, p, mesh);
  Mesh1D m1;
  TriMesh tm;
  RadialLogMesh rm;
  if (domain.as<Interval>() || domain.as<Ball>()) {
    for (const auto& x : space->node_coordinates()) m1.nodes.push_back(x[0]);
  } else if (const auto* poly = domain.as<ConvexPolygon>()) {
    const double depth = mesh.grade_depth >= 0.0 ? mesh.grade_depth : 0.25 * inradius(domain);
    tm = build_polygon_mesh(*poly, mesh.h, targets, depth);
    space = Space::triangles(domain, tm);
  } else {
    rm = build_radial_mesh(std::get<ExteriorBall>(domain.shape()), mesh.n);
  }

  SolverConfig cfg = config;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) {
      const Field& prev = out.back().field;
      if (domain.as<Interval>() || domain.as<Ball>()) {
        const auto old = m1.nodes;
        std::vector<int> toward = targets;
        if (domain.as<Ball>() && !toward.empty()) toward = {1};
        m1 = toward.empty() ? bisect(m1) : refine_toward(m1, toward);
        space = domain.as<Interval>() ? Space::interval(domain, m1) : Space::ball_radial(domain, m1);
        cfg.custom = interpolate_1d(old, prev.values, m1.nodes);
      } else if (domain.as<ConvexPolygon>()) {
        std::vector<std::array<int, 2>> parents;
        tm = refine_uniform(tm, parents);
        space = Space::triangles(domain, tm);
        cfg.custom.resize(parents.size());
        for (std::size_t i = 0; i < parents.size(); ++i)
          cfg.custom[i] = 0.5 * (prev.values[parents[i][0]] + prev.values[parents[i][1]]);
      } else {
        const auto old = rm.s_nodes;
        RadialLogMesh fine{rm.radius, {}};
        for (std::size_t i = 0; i + 1 < old.size(); ++i) {
          fine.s_nodes.push_back(old[i]);
          fine.s_nodes.push_back(0.5 * (old[i] + old[i + 1]));
        }
        fine.s_nodes.push_back(old.back());
        rm = fine;
        space = Space::exterior(domain, rm, p);
        cfg.custom = interpolate_1d(old, prev.values, rm.s_nodes);
      }
      cfg.init = InitKind::custom;
    } else if (!domain.is_bounded()) {
      space = Space::exterior(domain, rm, p);
    }
    QuotientReport rep = minimize_quotient(space, partition, p, cfg);
    SequenceLevel lvl;
    lvl.field = rep.field;
    lvl.quotient = rep.lambda_estimate;
    lvl.report = std::move(rep);
    out.push_back(std::move(lvl));
  }
  return out;
}

}  // namespace hardy
