#include <algorithm>
#include <cmath>

#include "hardy/kernels.hpp"

namespace hardy::kernels::parallel {

namespace {

int block_count(std::size_t n) { return static_cast<int>((n + kBlock - 1) / kBlock); }

/// Sum f(i) over [0, n) in fixed blocks; block partials are added in block order.
template <class F>
double blocked_sum(std::size_t n, F f) {
  const int nb = block_count(n);
  std::vector<double> part(nb, 0.0);
#pragma omp parallel for schedule(static)
  for (int b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += f(i);
    part[b] = acc;
  }
  double total = 0.0;
  for (double v : part) total += v;
  return total;
}

}  // namespace

Terms evaluate(const Assembly& a, std::span<const double> u) {
  const auto& sp = *a.space;
  const double p = a.p;
  Terms t;
  t.energy = blocked_sum(sp.cells().size(), [&](std::size_t c) {
    double gx, gy;
    return a.cell_measure[c] * pow_half(cell_grad_sq(sp.cells()[c], u, gx, gy), p);
  });
  t.boundary = blocked_sum(sp.boundary_samples().size(), [&](std::size_t s) {
    return a.boundary_factor[s] == 0.0 ? 0.0
                                       : a.boundary_factor[s] * abs_pow(sample_value(sp.boundary_samples()[s], u), p);
  });
  t.norm = blocked_sum(sp.samples().size(), [&](std::size_t s) {
    return a.volume_factor[s] == 0.0 ? 0.0 : a.volume_factor[s] * abs_pow(sample_value(sp.samples()[s], u), p);
  });
  return t;
}

void gradients(const Assembly& a, std::span<const double> u, std::span<double> g_num, std::span<double> g_den) {
  const auto& sp = *a.space;
  const double p = a.p;
  const auto& cells = sp.cells();
  const auto& bs = sp.boundary_samples();
  const auto& vs = sp.samples();
  const int nc = static_cast<int>(cells.size());
  const int nbs = static_cast<int>(bs.size());
  const int nvs = static_cast<int>(vs.size());

  std::vector<double> gxs(nc), gys(nc), g2s(nc);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) g2s[c] = cell_grad_sq(cells[c], u, gxs[c], gys[c]);
  const double eps2 = p == 2.0 ? 0.0 : regularisation_eps2(a, g2s);

  // Per-slot contributions, gathered per node below in the serial scatter order.
  std::vector<double> cc(3 * static_cast<std::size_t>(nc), 0.0);
  std::vector<double> bc(3 * static_cast<std::size_t>(nbs), 0.0);
  std::vector<double> vc(3 * static_cast<std::size_t>(nvs), 0.0);
#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (int c = 0; c < nc; ++c) {
      const auto& cell = cells[c];
      const double coef = p * a.cell_measure[c] * (p == 2.0 ? 1.0 : std::pow(g2s[c] + eps2, 0.5 * p - 1.0));
      for (int k = 0; k < cell.count; ++k) cc[3 * c + k] = coef * (gxs[c] * cell.grad[k].x + gys[c] * cell.grad[k].y);
    }
#pragma omp for schedule(static) nowait
    for (int s = 0; s < nbs; ++s) {
      const double coef = p * a.boundary_factor[s] * signed_pow(sample_value(bs[s], u), p);
      for (int k = 0; k < bs[s].count; ++k) bc[3 * s + k] = coef * bs[s].shape[k];
    }
#pragma omp for schedule(static)
    for (int s = 0; s < nvs; ++s) {
      const double coef = p * a.volume_factor[s] * signed_pow(sample_value(vs[s], u), p);
      for (int k = 0; k < vs[s].count; ++k) vc[3 * s + k] = coef * vs[s].shape[k];
    }
  }

  const auto& ci = sp.cell_incidence();
  const auto& bi = sp.boundary_incidence();
  const auto& vi = sp.sample_incidence();
  const int n = sp.node_count();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double num = 0.0;
    for (int j = ci.offset[i]; j < ci.offset[i + 1]; ++j) num += cc[ci.slot[j]];
    for (int j = bi.offset[i]; j < bi.offset[i + 1]; ++j) num += bc[bi.slot[j]];
    double den = 0.0;
    for (int j = vi.offset[i]; j < vi.offset[i + 1]; ++j) den += vc[vi.slot[j]];
    g_num[i] = num;
    g_den[i] = den;
  }
}

}  // namespace hardy::kernels::parallel
