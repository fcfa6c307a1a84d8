#pragma once

#include "hardy/boundary.hpp"
#include "hardy/kernels.hpp"
#include "hardy/space.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// Integral of |grad u|^p, exact per cell for P1 fields.
double dirichlet_energy_p(const Field& field, double p, Exec exec = Exec::parallel);

/// Sum over Robin pieces of sigma * integral |u|^p; Dirichlet pieces contribute 0.
double boundary_energy(const Field& field, const BoundaryPartition& partition, double p,
                       Exec exec = Exec::parallel);

/// Integral of (delta + alpha)^{-p} |u|^p (the p-th power of the weighted norm).
double weighted_norm_pp(const Field& field, const HardyWeight& weight, double p, Exec exec = Exec::parallel);

/// (energy + boundary) / weighted norm. Throws DegenerateFieldError on a zero denominator.
double rayleigh(const Field& field, const BoundaryPartition& partition, const HardyWeight& weight, double p,
                Exec exec = Exec::parallel);

/// Nodal gradient of the quotient; pinned nodes receive 0.
Field rayleigh_gradient(const Field& field, const BoundaryPartition& partition, const HardyWeight& weight,
                        double p, Exec exec = Exec::parallel);

}  // namespace hardy
