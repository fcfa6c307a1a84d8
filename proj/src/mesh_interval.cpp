#include <algorithm>
#include <cmath>
#include <limits>

#include "hardy/errors.hpp"
#include "hardy/mesh.hpp"

namespace hardy {

double Mesh1D::min_spacing() const {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) h = std::min(h, nodes[i + 1] - nodes[i]);
  return h;
}

namespace {

/// Cumulative offsets from the graded end: n spacings with consecutive ratio r,
/// smallest first, normalised to `length`. Summation starts at the small end so
/// tiny offsets keep full relative precision.
std::vector<double> graded_offsets(int n, double r, double length) {
  std::vector<double> h(n);
  // h[j] proportional to r^(n-1-j); build from the large end to avoid underflow in the scale.
  double v = 1.0;
  for (int j = n - 1; j >= 0; --j) {
    h[j] = v;
    v *= r;
  }
  double total = 0.0;
  for (double x : h) total += x;
  std::vector<double> off(n + 1, 0.0);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += h[j];
    off[j + 1] = length * (acc / total);
  }
  off[n] = length;
  return off;
}

/// Drop nodes that collapse onto a neighbour in floating point (possible when
/// grading toward an endpoint far from the origin).
void enforce_strict(std::vector<double>& nodes) {
  std::vector<double> out;
  out.reserve(nodes.size());
  for (double x : nodes) {
    if (out.empty() || x > out.back()) out.push_back(x);
  }
  // Keep the exact right endpoint.
  if (out.size() >= 2 && out.back() != nodes.back()) out.back() = nodes.back();
  nodes = std::move(out);
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

Mesh1D build_interval_mesh(const Interval& domain, int n, double grade_ratio,
                           const std::vector<int>& toward) {
  if (n < 2) throw ParameterError("interval mesh needs n >= 2 cells");
  if (!(grade_ratio > 0.0 && grade_ratio <= 1.0)) throw ParameterError("grade_ratio must lie in (0, 1]");
  for (int t : toward)
    if (t != 0 && t != 1) throw ParameterError("interval pieces are 0 (left) and 1 (right)");
  const double a = domain.a, b = domain.b, L = b - a;
  const bool left = contains(toward, 0), right = contains(toward, 1);

  Mesh1D m;
  m.nodes.resize(n + 1);
  if (grade_ratio == 1.0 || (!left && !right)) {
    for (int i = 0; i <= n; ++i) m.nodes[i] = a + L * (static_cast<double>(i) / n);
  } else if (left && right) {
    const int nl = n / 2, nr = n - nl;
    const double mid = a + 0.5 * L;
    auto lo = graded_offsets(nl, grade_ratio, 0.5 * L);
    auto hi = graded_offsets(nr, grade_ratio, 0.5 * L);
    for (int i = 0; i <= nl; ++i) m.nodes[i] = a + lo[i];
    m.nodes[nl] = mid;
    for (int j = 0; j < nr; ++j) m.nodes[n - j] = b - hi[j];
  } else if (left) {
    auto off = graded_offsets(n, grade_ratio, L);
    for (int i = 0; i <= n; ++i) m.nodes[i] = a + off[i];
  } else {
    auto off = graded_offsets(n, grade_ratio, L);
    for (int j = 0; j <= n; ++j) m.nodes[n - j] = b - off[j];
  }
  m.nodes.front() = a;
  m.nodes.back() = b;
  enforce_strict(m.nodes);
  if (m.nodes.size() < 3) throw ParameterError("grading collapsed the mesh");
  return m;
}

double grade_ratio_for_min_cell(const Interval& domain, int n, int graded_sides, double min_cell,
                                double floor_ratio) {
  if (graded_sides <= 0) return 1.0;
  const int m = std::max(1, n / graded_sides);
  const double span = (domain.b - domain.a) / graded_sides;
  auto smallest = [&](double r) {
    if (r >= 1.0) return span / m;
    // (1-r) r^(m-1) / (1 - r^m), evaluated in logs to survive tiny r^m.
    const double lg = std::log1p(-r) + (m - 1) * std::log(r) - std::log1p(-std::pow(r, m));
    return span * std::exp(lg);
  };
  if (smallest(1.0) <= min_cell) return 1.0;
  if (smallest(floor_ratio) >= min_cell) return floor_ratio;
  double lo = floor_ratio, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (smallest(mid) < min_cell) lo = mid;
    else hi = mid;
  }
  return hi;
}

Mesh1D refine_toward(const Mesh1D& mesh, const std::vector<int>& toward) {
  if (mesh.nodes.size() < 3) throw ParameterError("mesh too small to refine");
  const double a = mesh.nodes.front(), b = mesh.nodes.back();
  const bool left = contains(toward, 0), right = contains(toward, 1);
  const double reach = (left && right) ? 0.5 * (b - a) : (b - a);
  std::vector<double> nodes = mesh.nodes;
  // The scaled copy squares the end cell. Near an endpoint far from the origin
  // that cell may not be representable (below ~1e-9 |e|); the end cell is then
  // only bisected.
  auto resolvable = [&](double w, double e) { return w * w / reach >= 1e-9 * std::abs(e); };
  if (left) {
    const double w = mesh.nodes[1] - a;
    if (!resolvable(w, a)) {
      nodes.push_back(a + 0.5 * w);
    } else {
      for (double x : mesh.nodes) {
        if (x > a + reach * (1.0 + 1e-14)) break;
        nodes.push_back(a + w * ((x - a) / reach));
      }
    }
  }
  if (right) {
    const double w = b - mesh.nodes[mesh.nodes.size() - 2];
    if (!resolvable(w, b)) {
      nodes.push_back(b - 0.5 * w);
    } else {
      for (auto it = mesh.nodes.rbegin(); it != mesh.nodes.rend(); ++it) {
        if (*it < b - reach * (1.0 + 1e-14)) break;
        nodes.push_back(b - w * ((b - *it) / reach));
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.front() = a;
  nodes.back() = b;
  enforce_strict(nodes);
  return Mesh1D{std::move(nodes)};
}

Mesh1D bisect(const Mesh1D& mesh) {
  Mesh1D out;
  out.nodes.reserve(2 * mesh.nodes.size());
  for (std::size_t i = 0; i + 1 < mesh.nodes.size(); ++i) {
    out.nodes.push_back(mesh.nodes[i]);
    out.nodes.push_back(0.5 * (mesh.nodes[i] + mesh.nodes[i + 1]));
  }
  out.nodes.push_back(mesh.nodes.back());
  enforce_strict(out.nodes);
  return out;
}

RadialLogMesh build_radial_mesh(const ExteriorBall& domain, int n) {
  if (n < 2) throw ParameterError("radial mesh needs n >= 2 cells");
  RadialLogMesh m;
  m.radius = domain.radius;
  const double smax = std::log(domain.rho_max / domain.radius);
  m.s_nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) m.s_nodes[i] = smax * (static_cast<double>(i) / n);
  m.s_nodes.back() = smax;
  return m;
}

Mesh1D build_radial_mesh(const Ball& domain, int n) {
  if (n < 2) throw ParameterError("radial mesh needs n >= 2 cells");
  return build_interval_mesh(Interval{0.0, domain.radius}, n, 1.0, {});
}

}  // namespace hardy
