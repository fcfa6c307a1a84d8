#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/space.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// Serial reference loops or OpenMP block-parallel kernels. Both are
/// deterministic; parallel reductions sum fixed-size block partials in order.
enum class Exec { serial, parallel };

/// Coefficients binding a space to one partition, weight and exponent.
struct Assembly {
  SpacePtr space;
  double p = 2.0;
  std::vector<double> cell_measure;     // per gradient cell
  std::vector<double> volume_factor;    // base * w per volume sample
  std::vector<double> boundary_factor;  // base * sigma per boundary sample (0 on Dirichlet pieces)
};

Assembly make_assembly(const SpacePtr& space, const BoundaryPartition& partition, const HardyWeight& weight,
                       double p);

struct Terms {
  double energy = 0.0;    // integral of |grad u|^p
  double boundary = 0.0;  // integral of sigma |u|^p over Robin pieces
  double norm = 0.0;      // weighted integral of |u|^p

  double numerator() const { return energy + boundary; }
};

namespace kernels {

inline constexpr int kBlock = 1024;

namespace serial {
Terms evaluate(const Assembly& a, std::span<const double> u);
void gradients(const Assembly& a, std::span<const double> u, std::span<double> g_num, std::span<double> g_den);
}  // namespace serial

namespace parallel {
Terms evaluate(const Assembly& a, std::span<const double> u);
void gradients(const Assembly& a, std::span<const double> u, std::span<double> g_num, std::span<double> g_den);
}  // namespace parallel

/// Derivatives of the numerator and of the weighted norm with respect to every
/// nodal value (pins are not applied here). For p != 2, |grad u| is regularised
/// by eps = 1e-12 * (integral |grad u|^p / measure)^(1/p) in the p-Laplacian term.
inline void gradients(const Assembly& a, std::span<const double> u, std::span<double> g_num,
                      std::span<double> g_den, Exec exec) {
  if (exec == Exec::serial) serial::gradients(a, u, g_num, g_den);
  else parallel::gradients(a, u, g_num, g_den);
}

inline Terms evaluate(const Assembly& a, std::span<const double> u, Exec exec) {
  return exec == Exec::serial ? serial::evaluate(a, u) : parallel::evaluate(a, u);
}

/// eps^2 for the gradient regularisation, from per-cell |grad u|^2. Summed
/// serially so that both back ends agree bit for bit.
inline double regularisation_eps2(const Assembly& a, std::span<const double> g2) {
  double e = 0.0, m = 0.0;
  for (std::size_t c = 0; c < g2.size(); ++c) {
    e += a.cell_measure[c] * std::pow(g2[c], 0.5 * a.p);
    m += a.cell_measure[c];
  }
  const double eps = 1e-12 * std::pow(e / m, 1.0 / a.p);
  return eps * eps + 1e-300;
}

/// Per-cell |grad u|^2.
inline double cell_grad_sq(const GradCell& c, std::span<const double> u, double& gx, double& gy) {
  gx = 0.0;
  gy = 0.0;
  for (int k = 0; k < c.count; ++k) {
    gx += u[c.nodes[k]] * c.grad[k].x;
    gy += u[c.nodes[k]] * c.grad[k].y;
  }
  return gx * gx + gy * gy;
}

inline double sample_value(const Sample& s, std::span<const double> u) {
  double v = 0.0;
  for (int k = 0; k < s.count; ++k) v += s.shape[k] * u[s.nodes[k]];
  return v;
}

/// |t|^(p/2) for t >= 0 with the common exponents special-cased.
inline double pow_half(double t, double p) { return p == 2.0 ? t : std::pow(t, 0.5 * p); }
inline double abs_pow(double v, double p) { return p == 2.0 ? v * v : std::pow(std::abs(v), p); }
/// sign(v) |v|^(p-1).
inline double signed_pow(double v, double p) {
  return p == 2.0 ? v : std::copysign(std::pow(std::abs(v), p - 1.0), v);
}

}  // namespace kernels
}  // namespace hardy
