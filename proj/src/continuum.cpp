#include "checkerboard/continuum.hpp"

#include <cmath>
#include <stdexcept>

namespace checkerboard {

ChiralField::ChiralField(DirectedAmplitudeField v, double t, TransitionRates r)
    : values(std::move(v)), time(t), rates(r) {}

ChiralField chiral_field(const CausalFieldPair& pair, const TransitionRates& rates,
                         double time) {
  const double weight = std::exp(rates.total() * time);
  DirectedAmplitudeField out(pair.z_field.num_sites(), pair.z_field.kind());
  for (int site = 0; site < out.num_sites(); ++site) {
    // note the cross pairing: each component subtracts the opposite-sign
    // backward amplitude
    out.at(site, Direction::plus) =
        weight * (pair.z_field.at(site, Direction::plus) -
                  pair.zbar_field.at(site, Direction::minus));
    out.at(site, Direction::minus) =
        weight * (pair.z_field.at(site, Direction::minus) -
                  pair.zbar_field.at(site, Direction::plus));
  }
  return ChiralField(std::move(out), time, rates);
}

namespace {

// shared stencil walk: values(site, dir, slice) accessed through a callback
template <typename Value>
double central_residual_max(int num_sites, int num_slices, const LatticeSpec& spec,
                            double dt_slices, const Value& value,
                            const TransitionRates& rates, bool weighted) {
  const double inv_2dz = 1.0 / (2.0 * spec.delta_z());
  const double inv_2dt = 1.0 / (2.0 * dt_slices);
  const double coupling_plus = rates.zeta_plus - rates.zeta_minus;
  const double coupling_minus = -coupling_plus;
  const double total = rates.total();

  int lo_site = 0, hi_site = num_sites;
  if (spec.boundary == Boundary::absorbing) {
    lo_site = 2;
    hi_site = num_sites - 2;
    if (lo_site >= hi_site) throw std::invalid_argument("lattice too small for the stencil");
  }

  auto wrap = [&](int s) {
    if (spec.boundary == Boundary::periodic) {
      if (s < 0) s += num_sites;
      if (s >= num_sites) s -= num_sites;
    }
    return s;
  };

  double worst = 0.0;
  for (int j = 1; j + 1 < num_slices; ++j) {
    for (int site = lo_site; site < hi_site; ++site) {
      const int left = wrap(site - 1);
      const int right = wrap(site + 1);
      for (Direction d : {Direction::plus, Direction::minus}) {
        const double v_sign = d == Direction::plus ? spec.speed : -spec.speed;
        const double coupling = d == Direction::plus ? coupling_plus : coupling_minus;
        const Complex d_z = (value(right, d, j) - value(left, d, j)) * inv_2dz;
        const Complex d_t = (value(site, d, j + 1) - value(site, d, j - 1)) * inv_2dt;
        Complex r = v_sign * d_z + d_t - coupling * value(site, flip(d), j);
        if (weighted) r += total * value(site, d, j);
        worst = std::max(worst, std::abs(r));
      }
    }
  }
  return worst;
}

}  // namespace

double zzb_pde_residual(std::span<const CausalFieldPair> history, const LatticeSpec& spec,
                        const TransitionRates& rates) {
  if (history.size() < 3)
    throw std::invalid_argument("PDE residual needs at least 3 slices");
  const long stride = history[1].time_index - history[0].time_index;
  if (stride <= 0) throw std::invalid_argument("history must advance in time");
  for (size_t j = 0; j + 1 < history.size(); ++j) {
    if (history[j + 1].time_index - history[j].time_index != stride)
      throw std::invalid_argument("history slices must be uniformly spaced");
    if (history[j].z_field.num_sites() != spec.num_sites)
      throw std::invalid_argument("history does not match the lattice spec");
  }
  const double dt_slices = static_cast<double>(stride) * spec.delta_t;
  auto diff = [&](int site, Direction d, int j) {
    return history[j].z_field.at(site, d) - history[j].zbar_field.at(site, flip(d));
  };
  return central_residual_max(spec.num_sites, static_cast<int>(history.size()), spec,
                              dt_slices, diff, rates, /*weighted=*/true);
}

double transport_residual(std::span<const ChiralField> history, const LatticeSpec& spec,
                          const TransitionRates& rates) {
  if (history.size() < 3)
    throw std::invalid_argument("transport residual needs at least 3 slices");
  const double dt_slices = history[1].time - history[0].time;
  if (!(dt_slices > 0.0)) throw std::invalid_argument("history must advance in time");
  for (size_t j = 0; j + 1 < history.size(); ++j) {
    const double step = history[j + 1].time - history[j].time;
    if (std::abs(step - dt_slices) > 1e-12 * std::max(1.0, std::abs(dt_slices)))
      throw std::invalid_argument("history slices must be uniformly spaced");
    if (history[j].values.num_sites() != spec.num_sites)
      throw std::invalid_argument("history does not match the lattice spec");
  }
  auto value = [&](int site, Direction d, int j) { return history[j].values.at(site, d); };
  return central_residual_max(spec.num_sites, static_cast<int>(history.size()), spec,
                              dt_slices, value, rates, /*weighted=*/false);
}

OrderFit convergence_order(std::span<const ResidualEntry> entries) {
  if (entries.size() < 2) throw std::invalid_argument("order fit needs at least 2 entries");
  for (const ResidualEntry& e : entries) {
    if (!(e.dt > 0.0)) throw std::invalid_argument("ladder spacings must be positive");
    if (e.residual <= 0.0) return {0.0, true};
  }
  // least squares slope of log r against log dt
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(entries.size());
  for (const ResidualEntry& e : entries) {
    const double x = std::log(e.dt);
    const double y = std::log(e.residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("ladder needs at least two distinct spacings");
  return {(n * sxy - sx * sy) / denom, false};
}

}  // namespace checkerboard
