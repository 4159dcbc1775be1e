#include "checkerboard/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "checkerboard/parallel.hpp"

namespace checkerboard {

LatticeSpec::LatticeSpec(double dt, int sites, Boundary b, double v)
    : delta_t(dt), speed(v), num_sites(sites), boundary(b) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("delta_t must be positive");
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("speed must be positive");
  if (sites < 2) throw std::invalid_argument("num_sites must be at least 2");
}

TransitionRates::TransitionRates(double zp, double zm) : zeta_plus(zp), zeta_minus(zm) {
  if (!(zp >= 0.0) || !std::isfinite(zp) || !(zm >= 0.0) || !std::isfinite(zm))
    throw std::invalid_argument("transition rates must be finite and nonnegative");
}

DirectedAmplitudeField::DirectedAmplitudeField(int num_sites, ScalarKind kind)
    : num_sites_(num_sites), kind_(kind), data_(2 * static_cast<size_t>(num_sites), 0.0) {
  if (num_sites < 2) throw std::invalid_argument("field needs at least 2 sites");
}

DirectedAmplitudeField DirectedAmplitudeField::point_source(int num_sites, int site,
                                                            Direction d, ScalarKind kind,
                                                            Complex amplitude) {
  DirectedAmplitudeField f(num_sites, kind);
  if (site < 0 || site >= num_sites) throw std::invalid_argument("source site out of range");
  if (kind == ScalarKind::real && amplitude.imag() != 0.0)
    throw std::invalid_argument("complex amplitude in a real-kind field");
  f.at(site, d) = amplitude;
  return f;
}

Complex DirectedAmplitudeField::sum() const {
  Complex s = 0.0;
  for (const Complex& v : data_) s += v;
  return s;
}

double DirectedAmplitudeField::max_abs() const {
  double m = 0.0;
  for (const Complex& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool DirectedAmplitudeField::all_finite() const {
  for (const Complex& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

bool DirectedAmplitudeField::identical_to(const DirectedAmplitudeField& other) const {
  if (num_sites_ != other.num_sites_ || kind_ != other.kind_) return false;
  for (size_t i = 0; i < data_.size(); ++i) {
    if (std::memcmp(&data_[i], &other.data_[i], sizeof(Complex)) != 0) return false;
  }
  return true;
}

WeightPair resolve_weights(const TransitionRates& rates, const LatticeSpec& spec,
                           const StepWeight& weight) {
  if (weight.mode == WeightMode::real) {
    if (rates.zeta_plus != rates.zeta_minus)
      throw std::invalid_argument("single-rate stepping requires equal rates");
    if (!rates.interpretable_with(spec))
      throw std::domain_error("total rate per step must stay below one");
    const double flip = rates.zeta_plus * spec.delta_t;
    return {Complex(weight.unit_stay ? 1.0 : 1.0 - flip, 0.0), Complex(flip, 0.0)};
  }
  if (!(weight.epsilon > 0.0) || !std::isfinite(weight.epsilon))
    throw std::invalid_argument("imaginary weight needs a positive epsilon");
  const Complex flip(0.0, weight.epsilon);
  return {weight.unit_stay ? Complex(1.0, 0.0) : Complex(1.0, -weight.epsilon), flip};
}

namespace {

// neighbour index with boundary handling; -1 means "contributes zero"
inline int neighbour(int site, int offset, const LatticeSpec& spec) {
  int j = site + offset;
  if (spec.boundary == Boundary::periodic) {
    if (j < 0) j += spec.num_sites;
    if (j >= spec.num_sites) j -= spec.num_sites;
    return j;
  }
  return (j < 0 || j >= spec.num_sites) ? -1 : j;
}

void check_field_spec(const DirectedAmplitudeField& f, const LatticeSpec& spec) {
  if (f.num_sites() != spec.num_sites)
    throw std::invalid_argument("field size does not match the lattice spec");
}

}  // namespace

DirectedAmplitudeField step_simple(const DirectedAmplitudeField& field,
                                   const TransitionRates& rates, const LatticeSpec& spec,
                                   const StepWeight& weight) {
  check_field_spec(field, spec);
  if (field.kind() == ScalarKind::real && weight.mode == WeightMode::imaginary)
    throw std::invalid_argument("imaginary weights need a complex-kind field");
  const WeightPair w = resolve_weights(rates, spec, weight);

  DirectedAmplitudeField next(spec.num_sites, field.kind());
  parallel_for(static_cast<size_t>(spec.num_sites), [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      const int site = static_cast<int>(i);
      const int left = neighbour(site, -1, spec);
      const int right = neighbour(site, +1, spec);
      const Complex from_left = left >= 0 ? field.at(left, Direction::plus) : 0.0;
      const Complex from_right = right >= 0 ? field.at(right, Direction::minus) : 0.0;
      next.at(site, Direction::plus) = w.stay * from_left + w.flip * from_right;
      next.at(site, Direction::minus) = w.stay * from_right + w.flip * from_left;
    }
  });
  return next;
}

DirectedAmplitudeField evolve_simple(DirectedAmplitudeField field,
                                     const TransitionRates& rates, const LatticeSpec& spec,
                                     int steps, const StepWeight& weight) {
  if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
  for (int s = 0; s < steps; ++s) field = step_simple(field, rates, spec, weight);
  return field;
}

PathQuery::PathQuery(int steps, Direction start, Direction end, int disp,
                     std::optional<int> reversals)
    : n(steps), start_dir(start), end_dir(end), displacement(disp), reversal_count(reversals) {
  if (steps < 0) throw std::invalid_argument("path length must be nonnegative");
  if (steps > 24) throw std::invalid_argument("path enumeration is bounded at n = 24");
}

std::vector<std::uint64_t> path_reversal_histogram(const PathQuery& query) {
  const int n = query.n;
  std::vector<std::uint64_t> counts(static_cast<size_t>(n) + 1, 0);
  if (n == 0) {
    if (query.end_dir == query.start_dir && query.displacement == 0) counts[0] = 1;
    return counts;
  }
  // bit i of seq is the direction after step i+1 (0 = plus); the start
  // direction is fixed. Motion during each step follows the direction held
  // while stepping, so displacement counts the first n of the n+1 states.
  const std::uint32_t start_bit = query.start_dir == Direction::plus ? 0u : 1u;
  const std::uint32_t end_bit = query.end_dir == Direction::plus ? 0u : 1u;
  const std::uint32_t moved_mask = n >= 2 ? ((1u << (n - 1)) - 1u) : 0u;
  const std::uint64_t total = 1ull << n;
  for (std::uint64_t seq64 = 0; seq64 < total; ++seq64) {
    const auto seq = static_cast<std::uint32_t>(seq64);
    if (((seq >> (n - 1)) & 1u) != end_bit) continue;
    const std::uint32_t minus_moves = start_bit + std::popcount(seq & moved_mask);
    const int disp = n - 2 * static_cast<int>(minus_moves);
    if (disp != query.displacement) continue;
    const std::uint32_t transitions = (seq ^ (seq >> 1)) & moved_mask;
    const int reversals =
        static_cast<int>(std::popcount(transitions)) + static_cast<int>((seq ^ start_bit) & 1u);
    counts[static_cast<size_t>(reversals)]++;
  }
  return counts;
}

Complex path_sum_amplitude(const PathQuery& query, const TransitionRates& rates,
                           const LatticeSpec& spec, const StepWeight& weight) {
  const WeightPair w = resolve_weights(rates, spec, weight);
  const std::vector<std::uint64_t> counts = path_reversal_histogram(query);

  // stay^(n-R) flip^R by running products, exact integer path counts
  std::vector<Complex> stay_pow(counts.size()), flip_pow(counts.size());
  stay_pow[0] = 1.0;
  flip_pow[0] = 1.0;
  for (size_t k = 1; k < counts.size(); ++k) {
    stay_pow[k] = stay_pow[k - 1] * w.stay;
    flip_pow[k] = flip_pow[k - 1] * w.flip;
  }
  Complex out = 0.0;
  for (size_t r = 0; r < counts.size(); ++r) {
    if (query.reversal_count && static_cast<size_t>(*query.reversal_count) != r) continue;
    if (counts[r] == 0) continue;
    out += static_cast<double>(counts[r]) * stay_pow[counts.size() - 1 - r] * flip_pow[r];
  }
  return out;
}

CausalFieldPair::CausalFieldPair(DirectedAmplitudeField z, DirectedAmplitudeField zbar,
                                 long t_index)
    : z_field(std::move(z)), zbar_field(std::move(zbar)), time_index(t_index) {
  if (z_field.num_sites() != zbar_field.num_sites())
    throw std::invalid_argument("paired fields must share a lattice");
  if (z_field.kind() != zbar_field.kind())
    throw std::invalid_argument("paired fields must share a scalar kind");
}

CausalFieldPair CausalFieldPair::zeros(const LatticeSpec& spec, ScalarKind kind, long t_index) {
  return {DirectedAmplitudeField(spec.num_sites, kind),
          DirectedAmplitudeField(spec.num_sites, kind), t_index};
}

CausalFieldPair step_causal(const CausalFieldPair& pair, const TransitionRates& rates,
                            const LatticeSpec& spec) {
  check_field_spec(pair.z_field, spec);
  if (!rates.interpretable_with(spec))
    throw std::domain_error("total rate per step must stay below one");
  const double dt = spec.delta_t;
  const double det = 1.0 - rates.zeta_plus * rates.zeta_minus * dt * dt;
  if (det == 0.0) throw std::domain_error("per-site elimination is singular");
  const double stay = 1.0 - rates.total() * dt;
  const double wp = rates.zeta_plus * dt;
  const double wm = rates.zeta_minus * dt;

  CausalFieldPair next = CausalFieldPair::zeros(spec, pair.z_field.kind(), pair.time_index + 1);
  const DirectedAmplitudeField& z = pair.z_field;
  parallel_for(static_cast<size_t>(spec.num_sites), [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      const int site = static_cast<int>(i);
      const int left = neighbour(site, -1, spec);
      const int right = neighbour(site, +1, spec);
      const Complex zp_l = left >= 0 ? z.at(left, Direction::plus) : 0.0;
      const Complex zm_r = right >= 0 ? z.at(right, Direction::minus) : 0.0;
      // forward update with the future backward term eliminated through the
      // constraint: couples the two directions at this site and time only
      const Complex b_plus = stay * zp_l + wp * zm_r;
      const Complex b_minus = stay * zm_r + wm * zp_l;
      next.z_field.at(site, Direction::plus) = (b_plus + wm * b_minus) / det;
      next.z_field.at(site, Direction::minus) = (b_minus + wp * b_plus) / det;
      // backward fields at the new time are the constraint image of the old
      // forward fields
      next.zbar_field.at(site, Direction::plus) = zm_r;
      next.zbar_field.at(site, Direction::minus) = zp_l;
    }
  });
  return next;
}

double causality_residual(const CausalFieldPair& at_t, const CausalFieldPair& next,
                          const LatticeSpec& spec) {
  check_field_spec(at_t.z_field, spec);
  check_field_spec(next.z_field, spec);
  if (next.time_index != at_t.time_index + 1)
    throw std::invalid_argument("causality residual needs adjacent time indices");
  double worst = 0.0;
  for (int site = 0; site < spec.num_sites; ++site) {
    const int right = neighbour(site, +1, spec);
    const int left = neighbour(site, -1, spec);
    const Complex zbar_m = right >= 0 ? next.zbar_field.at(right, Direction::minus) : 0.0;
    const Complex zbar_p = left >= 0 ? next.zbar_field.at(left, Direction::plus) : 0.0;
    worst = std::max(worst, std::abs(at_t.z_field.at(site, Direction::plus) - zbar_m));
    worst = std::max(worst, std::abs(at_t.z_field.at(site, Direction::minus) - zbar_p));
  }
  return worst;
}

double CausalResiduals::max() const {
  return std::max(forward_eq, std::max(backward_eq, constraint));
}

CausalResiduals causal_step_residuals(const CausalFieldPair& at_t, const CausalFieldPair& next,
                                      const TransitionRates& rates, const LatticeSpec& spec) {
  check_field_spec(at_t.z_field, spec);
  check_field_spec(next.z_field, spec);
  if (next.time_index != at_t.time_index + 1)
    throw std::invalid_argument("step residuals need adjacent time indices");
  const double dt = spec.delta_t;
  const double stay = 1.0 - rates.total() * dt;
  const double wp = rates.zeta_plus * dt;
  const double wm = rates.zeta_minus * dt;

  CausalResiduals out;
  for (int site = 0; site < spec.num_sites; ++site) {
    const int left = neighbour(site, -1, spec);
    const int right = neighbour(site, +1, spec);
    const Complex zp_l = left >= 0 ? at_t.z_field.at(left, Direction::plus) : 0.0;
    const Complex zm_r = right >= 0 ? at_t.z_field.at(right, Direction::minus) : 0.0;
    const Complex zp_new = next.z_field.at(site, Direction::plus);
    const Complex zm_new = next.z_field.at(site, Direction::minus);
    const Complex zbp_new = next.zbar_field.at(site, Direction::plus);
    const Complex zbm_new = next.zbar_field.at(site, Direction::minus);

    // forward update at the new time, future backward terms routed through
    // the constraint onto the new forward fields
    const Complex r_fwd_p = zp_new - stay * zp_l - wm * zm_new - wp * zm_r;
    const Complex r_fwd_m = zm_new - stay * zm_r - wp * zp_new - wm * zp_l;
    // backward update at the new time, left side routed the same way
    const Complex r_bwd_p = zp_new - stay * zbm_new - wm * zm_new - wp * zbp_new;
    const Complex r_bwd_m = zm_new - stay * zbp_new - wp * zp_new - wm * zbm_new;

    out.forward_eq = std::max(out.forward_eq, std::max(std::abs(r_fwd_p), std::abs(r_fwd_m)));
    out.backward_eq = std::max(out.backward_eq, std::max(std::abs(r_bwd_p), std::abs(r_bwd_m)));
  }
  out.constraint = causality_residual(at_t, next, spec);
  return out;
}

}  // namespace checkerboard
