#include <algorithm>
#include <cmath>

#include "hardy/errors.hpp"
#include "hardy/kernels.hpp"

namespace hardy {

Assembly make_assembly(const SpacePtr& space, const BoundaryPartition& partition, const HardyWeight& weight,
                       double p) {
  if (!(p > 1.0)) throw ParameterError("p must exceed 1");
  space->check_exponent(p);
  if (weight.space_id != space->id() || weight.records.size() != space->samples().size())
    throw ParameterError("weight was built on a different mesh");
  if (weight.p != p) throw ParameterError("weight was built for a different exponent");
  if (partition.size() != space->domain().piece_count())
    throw ParameterError("partition does not match the space's domain");
  Assembly a;
  a.space = space;
  a.p = p;
  a.cell_measure.reserve(space->cells().size());
  for (const auto& c : space->cells()) a.cell_measure.push_back(c.measure);
  a.volume_factor.resize(space->samples().size());
  for (std::size_t i = 0; i < a.volume_factor.size(); ++i)
    a.volume_factor[i] = space->samples()[i].base * weight.records[i].w;
  a.boundary_factor.resize(space->boundary_samples().size());
  for (std::size_t i = 0; i < a.boundary_factor.size(); ++i) {
    const auto& b = space->boundary_samples()[i];
    const auto& cond = partition.condition(b.piece_id);
    a.boundary_factor[i] = cond.is_dirichlet() ? 0.0 : b.base * cond.sigma;
  }
  return a;
}

namespace kernels::serial {

Terms evaluate(const Assembly& a, std::span<const double> u) {
  const auto& sp = *a.space;
  const double p = a.p;
  Terms t;
  double gx, gy;
  for (std::size_t c = 0; c < sp.cells().size(); ++c)
    t.energy += a.cell_measure[c] * pow_half(cell_grad_sq(sp.cells()[c], u, gx, gy), p);
  for (std::size_t s = 0; s < sp.boundary_samples().size(); ++s)
    if (a.boundary_factor[s] != 0.0) t.boundary += a.boundary_factor[s] * abs_pow(sample_value(sp.boundary_samples()[s], u), p);
  for (std::size_t s = 0; s < sp.samples().size(); ++s)
    if (a.volume_factor[s] != 0.0) t.norm += a.volume_factor[s] * abs_pow(sample_value(sp.samples()[s], u), p);
  return t;
}

void gradients(const Assembly& a, std::span<const double> u, std::span<double> g_num, std::span<double> g_den) {
  const auto& sp = *a.space;
  const double p = a.p;
  std::fill(g_num.begin(), g_num.end(), 0.0);
  std::fill(g_den.begin(), g_den.end(), 0.0);
  double gx, gy;
  std::vector<double> g2s(sp.cells().size());
  for (std::size_t ci = 0; ci < g2s.size(); ++ci) g2s[ci] = cell_grad_sq(sp.cells()[ci], u, gx, gy);
  const double eps2 = p == 2.0 ? 0.0 : regularisation_eps2(a, g2s);
  for (std::size_t ci = 0; ci < sp.cells().size(); ++ci) {
    const auto& c = sp.cells()[ci];
    const double g2 = cell_grad_sq(c, u, gx, gy);
    const double coef = p * a.cell_measure[ci] * (p == 2.0 ? 1.0 : std::pow(g2 + eps2, 0.5 * p - 1.0));
    for (int k = 0; k < c.count; ++k) g_num[c.nodes[k]] += coef * (gx * c.grad[k].x + gy * c.grad[k].y);
  }
  for (std::size_t si = 0; si < sp.boundary_samples().size(); ++si) {
    const auto& s = sp.boundary_samples()[si];
    const double coef = p * a.boundary_factor[si] * signed_pow(sample_value(s, u), p);
    for (int k = 0; k < s.count; ++k) g_num[s.nodes[k]] += coef * s.shape[k];
  }
  for (std::size_t si = 0; si < sp.samples().size(); ++si) {
    const auto& s = sp.samples()[si];
    const double coef = p * a.volume_factor[si] * signed_pow(sample_value(s, u), p);
    for (int k = 0; k < s.count; ++k) g_den[s.nodes[k]] += coef * s.shape[k];
  }
}

}  // namespace kernels::serial
}  // namespace hardy
