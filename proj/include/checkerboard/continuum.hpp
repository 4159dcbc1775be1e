#pragma once

#include <span>

#include "checkerboard/lattice.hpp"

namespace checkerboard {

// Weighted difference of forward and backward amplitudes,
//   plus component:  exp(total_rate * t) * (z_+ - zbar_-)
//   minus component: exp(total_rate * t) * (z_- - zbar_+),
// the fields that obey the first-order transport equation in the limit.
struct ChiralField {
  DirectedAmplitudeField values;
  double time = 0.0;
  TransitionRates rates;

  ChiralField(DirectedAmplitudeField v, double t, TransitionRates r);
};

ChiralField chiral_field(const CausalFieldPair& pair, const TransitionRates& rates,
                         double time);

// Residual of the coupled first-order PDE for the unweighted differences
//   d_pm = z_pm - zbar_mp:
//   +-v d_z[d_pm] + d_t[d_pm] + (zp + zm) d_pm - (zeta_pm - zeta_mp) d_mp,
// second-order central stencils in z and t. The time spacing is read from
// the slice time indices (uniform spacing required, at least 3 slices);
// max-norm over all interior slices. Absorbing boundaries exclude two cells
// per edge; periodic histories evaluate every site.
double zzb_pde_residual(std::span<const CausalFieldPair> history, const LatticeSpec& spec,
                        const TransitionRates& rates);

// Same stencil layout for the weighted fields:
//   +-v d_z A_pm + d_t A_pm - (zeta_pm - zeta_mp) A_mp.
// The time spacing is read from the slice times.
double transport_residual(std::span<const ChiralField> history, const LatticeSpec& spec,
                          const TransitionRates& rates);

struct ResidualEntry {
  double dt = 0.0;
  double residual = 0.0;
};

struct OrderFit {
  double order = 0.0;
  bool exact = false;  // some residual was exactly zero; no slope to fit
};

// Least-squares slope of log(residual) against log(dt). Entries with a
// nonpositive residual flag the ladder as exact instead of fitting.
OrderFit convergence_order(std::span<const ResidualEntry> entries);

}  // namespace checkerboard
