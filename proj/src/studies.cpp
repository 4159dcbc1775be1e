#include "studies.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace checkerboard {

namespace {

constexpr double domain_length = 12.8;
constexpr double sample_time = 0.4;
constexpr int sample_stride = 2;  // skips the exactly-cancelling adjacent slice

constexpr double default_ladder[] = {0.1, 0.05, 0.025, 0.0125};

Complex gaussian_mod(double x, double center, double width, double wavenumber) {
  const double u = x - center;
  return std::exp(-u * u / (width * width)) * std::polar(1.0, wavenumber * u);
}

struct Window {
  LatticeSpec spec;
  int n_star;
  std::vector<long> record;  // three recorded step indices
};

Window make_window(double dt) {
  const int sites = static_cast<int>(std::lround(domain_length / dt));
  const int n_star = static_cast<int>(std::lround(sample_time / dt));
  if (n_star - sample_stride < 1)
    throw std::invalid_argument("step size too coarse for the sampling window");
  Window w{LatticeSpec(dt, sites), n_star,
           {n_star - sample_stride, n_star, n_star + sample_stride}};
  return w;
}

// causal evolution from Gaussian-modulated forward data; returns the three
// recorded slices
std::vector<CausalFieldPair> evolve_recorded(const Window& w, const TransitionRates& rates,
                                             double width, int kmode) {
  const double k = 2.0 * std::numbers::pi * kmode / domain_length;
  auto pair = CausalFieldPair::zeros(w.spec, ScalarKind::cplx);
  for (int site = 0; site < w.spec.num_sites; ++site)
    pair.z_field.at(site, Direction::plus) =
        gaussian_mod(site * w.spec.delta_z(), domain_length / 2.0, width, k);
  std::vector<CausalFieldPair> slices;
  const long last = w.record.back();
  for (long step = 1; step <= last; ++step) {
    pair = step_causal(pair, rates, w.spec);
    if (step == w.record[slices.size()]) slices.push_back(pair);
  }
  return slices;
}

double lattice_residual(double dt, bool weighted) {
  const TransitionRates rates(1.2, 0.4);
  const Window w = make_window(dt);
  const auto slices = evolve_recorded(w, rates, 1.6, 2);
  if (weighted) {
    std::vector<ChiralField> fields;
    for (const auto& slice : slices)
      fields.push_back(chiral_field(slice, rates, static_cast<double>(slice.time_index) * dt));
    return transport_residual(fields, w.spec, rates);
  }
  return zzb_pde_residual(slices, w.spec, rates);
}

double free_transport_residual(double dt) {
  const TransitionRates rates(0.0, 0.0);
  const Window w = make_window(dt);
  const double k = 2.0 * std::numbers::pi * 4 / domain_length;
  std::vector<ChiralField> fields;
  for (long n : w.record) {
    const double t = static_cast<double>(n) * dt;
    DirectedAmplitudeField values(w.spec.num_sites, ScalarKind::cplx);
    for (int site = 0; site < w.spec.num_sites; ++site) {
      const double z = site * w.spec.delta_z();
      values.at(site, Direction::plus) =
          gaussian_mod(z - t, domain_length / 2.0, 1.2, k);
      values.at(site, Direction::minus) =
          gaussian_mod(z + t, domain_length / 2.0 + 1.0, 1.0, -k);
    }
    fields.emplace_back(std::move(values), t, rates);
  }
  return transport_residual(fields, w.spec, rates);
}

double free_zzb_residual(double dt) {
  const TransitionRates rates(0.0, 0.0);
  const Window w = make_window(dt);
  const double k = 2.0 * std::numbers::pi * 4 / domain_length;
  std::vector<CausalFieldPair> pairs;
  for (long n : w.record) {
    const double t = static_cast<double>(n) * dt;
    DirectedAmplitudeField z_field(w.spec.num_sites, ScalarKind::cplx);
    DirectedAmplitudeField zbar_field(w.spec.num_sites, ScalarKind::cplx);
    for (int site = 0; site < w.spec.num_sites; ++site) {
      const double z = site * w.spec.delta_z();
      const double mid = domain_length / 2.0;
      z_field.at(site, Direction::plus) = gaussian_mod(z - t, mid, 1.2, k);
      z_field.at(site, Direction::minus) = gaussian_mod(z + t, mid + 1.0, 1.1, -k);
      zbar_field.at(site, Direction::minus) = 0.5 * gaussian_mod(z - t, mid, 1.0, k);
      zbar_field.at(site, Direction::plus) = 0.3 * gaussian_mod(z + t, mid + 1.0, 0.9, -k);
    }
    pairs.emplace_back(std::move(z_field), std::move(zbar_field), n);
  }
  return zzb_pde_residual(pairs, w.spec, rates);
}

double exact_residual(double dt) {
  const TransitionRates rates(0.0, 0.0);
  const Window w = make_window(dt);
  const auto slices = evolve_recorded(w, rates, 1.2, 4);
  std::vector<ChiralField> fields;
  for (const auto& slice : slices)
    fields.push_back(chiral_field(slice, rates, static_cast<double>(slice.time_index) * dt));
  return transport_residual(fields, w.spec, rates);
}

}  // namespace

StudyKind parse_study(const std::string& name) {
  if (name == "transport-lattice") return StudyKind::transport_lattice;
  if (name == "zzb-lattice") return StudyKind::zzb_lattice;
  if (name == "transport-free") return StudyKind::transport_free;
  if (name == "zzb-free") return StudyKind::zzb_free;
  if (name == "exact") return StudyKind::exact;
  throw std::invalid_argument("unknown study '" + name + "'");
}

std::string study_name(StudyKind kind) {
  switch (kind) {
    case StudyKind::transport_lattice: return "transport-lattice";
    case StudyKind::zzb_lattice: return "zzb-lattice";
    case StudyKind::transport_free: return "transport-free";
    case StudyKind::zzb_free: return "zzb-free";
    case StudyKind::exact: return "exact";
  }
  throw std::logic_error("unreachable");
}

StudyResult run_study(StudyKind kind, std::span<const double> ladder) {
  std::vector<double> dts(ladder.begin(), ladder.end());
  if (dts.empty()) dts.assign(std::begin(default_ladder), std::end(default_ladder));
  if (dts.size() < 3) throw std::invalid_argument("ladder needs at least 3 step sizes");
  for (double dt : dts)
    if (!(dt > 0.0)) throw std::invalid_argument("ladder step sizes must be positive");

  StudyResult result;
  for (double dt : dts) {
    double residual = 0.0;
    switch (kind) {
      case StudyKind::transport_lattice: residual = lattice_residual(dt, true); break;
      case StudyKind::zzb_lattice: residual = lattice_residual(dt, false); break;
      case StudyKind::transport_free: residual = free_transport_residual(dt); break;
      case StudyKind::zzb_free: residual = free_zzb_residual(dt); break;
      case StudyKind::exact: residual = exact_residual(dt); break;
    }
    result.ladder.push_back({dt, residual});
  }
  result.fit = convergence_order(result.ladder);
  return result;
}

}  // namespace checkerboard
