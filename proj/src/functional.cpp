#include "hardy/functional.hpp"

#include <cmath>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

void check_field(const Field& f) {
  if (!f.space) throw ParameterError("field has no space");
  if (static_cast<int>(f.values.size()) != f.space->node_count() || f.pinned.size() != f.values.size())
    throw ParameterError("field size does not match its space");
}

/// Assembly carrying only what the requested terms need.
Assembly bare_assembly(const Field& f, double p) {
  if (!(p > 1.0)) throw ParameterError("p must exceed 1");
  f.space->check_exponent(p);
  Assembly a;
  a.space = f.space;
  a.p = p;
  for (const auto& c : f.space->cells()) a.cell_measure.push_back(c.measure);
  a.volume_factor.assign(f.space->samples().size(), 0.0);
  a.boundary_factor.assign(f.space->boundary_samples().size(), 0.0);
  return a;
}

}  // namespace

double dirichlet_energy_p(const Field& field, double p, Exec exec) {
  check_field(field);
  return kernels::evaluate(bare_assembly(field, p), field.values, exec).energy;
}

double boundary_energy(const Field& field, const BoundaryPartition& partition, double p, Exec exec) {
  check_field(field);
  if (partition.size() != field.space->domain().piece_count())
    throw ParameterError("partition does not match the field's domain");
  Assembly a = bare_assembly(field, p);
  const auto& bs = field.space->boundary_samples();
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const auto& c = partition.condition(bs[i].piece_id);
    a.boundary_factor[i] = c.is_dirichlet() ? 0.0 : bs[i].base * c.sigma;
  }
  return kernels::evaluate(a, field.values, exec).boundary;
}

double weighted_norm_pp(const Field& field, const HardyWeight& weight, double p, Exec exec) {
  check_field(field);
  if (weight.space_id != field.space->id() || weight.records.size() != field.space->samples().size())
    throw ParameterError("weight was built on a different mesh");
  if (weight.p != p) throw ParameterError("weight was built for a different exponent");
  Assembly a = bare_assembly(field, p);
  for (std::size_t i = 0; i < a.volume_factor.size(); ++i)
    a.volume_factor[i] = field.space->samples()[i].base * weight.records[i].w;
  return kernels::evaluate(a, field.values, exec).norm;
}

double rayleigh(const Field& field, const BoundaryPartition& partition, const HardyWeight& weight, double p,
                Exec exec) {
  check_field(field);
  const Assembly a = make_assembly(field.space, partition, weight, p);
  const Terms t = kernels::evaluate(a, field.values, exec);
  if (!(t.norm > 0.0)) throw DegenerateFieldError("weighted norm of the field vanishes");
  return t.numerator() / t.norm;
}

Field rayleigh_gradient(const Field& field, const BoundaryPartition& partition, const HardyWeight& weight,
                        double p, Exec exec) {
  check_field(field);
  const Assembly a = make_assembly(field.space, partition, weight, p);
  const Terms t = kernels::evaluate(a, field.values, exec);
  if (!(t.norm > 0.0)) throw DegenerateFieldError("weighted norm of the field vanishes");
  const double q = t.numerator() / t.norm;
  const int n = field.space->node_count();
  std::vector<double> gn(n), gd(n);
  kernels::gradients(a, field.values, gn, gd, exec);
  Field g = field;
  for (int i = 0; i < n; ++i) g.values[i] = field.pinned[i] ? 0.0 : (gn[i] - q * gd[i]) / t.norm;
  return g;
}

}  // namespace hardy
