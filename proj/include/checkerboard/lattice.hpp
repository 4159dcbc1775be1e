#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace checkerboard {

using Complex = std::complex<double>;

enum class Boundary { periodic, absorbing };
enum class ScalarKind { real, cplx };
enum class Direction : int { plus = 0, minus = 1 };

inline Direction flip(Direction d) {
  return d == Direction::plus ? Direction::minus : Direction::plus;
}
inline int sign_of(Direction d) { return d == Direction::plus ? +1 : -1; }

// Light-cone lattice geometry. The spatial spacing is always speed * delta_t;
// it is derived, never set independently.
struct LatticeSpec {
  double delta_t = 0.0;
  double speed = 1.0;  // signal speed, natural units
  int num_sites = 0;
  Boundary boundary = Boundary::periodic;

  LatticeSpec(double dt, int sites, Boundary b = Boundary::periodic, double v = 1.0);

  double delta_z() const { return speed * delta_t; }
};

// Direction-flip rates per unit time. mass() is the rate asymmetry, which is
// the mass parameter of the continuum limit in natural units.
struct TransitionRates {
  double zeta_plus = 0.0;
  double zeta_minus = 0.0;

  TransitionRates(double zp, double zm);
  static TransitionRates symmetric(double a) { return {a, a}; }

  double omega() const { return std::abs(zeta_plus - zeta_minus); }
  double mass() const { return omega(); }
  double total() const { return zeta_plus + zeta_minus; }

  // Probabilistic interpretability bound: total rate per step below one.
  bool interpretable_with(const LatticeSpec& spec) const {
    return total() * spec.delta_t < 1.0;
  }
};

// Amplitudes indexed by (site, direction). Real-kind fields keep zero
// imaginary parts; complex storage either way.
class DirectedAmplitudeField {
 public:
  DirectedAmplitudeField(int num_sites, ScalarKind kind);

  static DirectedAmplitudeField point_source(int num_sites, int site, Direction d,
                                             ScalarKind kind, Complex amplitude = 1.0);

  Complex& at(int site, Direction d) { return data_[2 * site + static_cast<int>(d)]; }
  const Complex& at(int site, Direction d) const {
    return data_[2 * site + static_cast<int>(d)];
  }

  int num_sites() const { return num_sites_; }
  ScalarKind kind() const { return kind_; }

  Complex sum() const;  // signed sum over all sites and directions, fixed order
  double max_abs() const;
  bool all_finite() const;
  bool identical_to(const DirectedAmplitudeField& other) const;  // bitwise

 private:
  int num_sites_;
  ScalarKind kind_;
  std::vector<Complex> data_;
};

enum class WeightMode { real, imaginary };

// Per-step stay/flip weights. Real mode uses the symmetric rate a directly:
// stay = 1 - a dt, flip = a dt. Imaginary mode substitutes a dt -> i epsilon.
// unit_stay replaces the stay weight by exactly 1 (documented approximation,
// off by default; flips weights are untouched).
struct StepWeight {
  WeightMode mode = WeightMode::real;
  double epsilon = 0.0;
  bool unit_stay = false;

  static StepWeight real() { return {}; }
  static StepWeight imaginary(double eps, bool unit = false) {
    return {WeightMode::imaginary, eps, unit};
  }
};

struct WeightPair {
  Complex stay;
  Complex flip;
};

// Resolve the stay/flip pair for a symmetric-rate step. Real mode requires
// zeta_plus == zeta_minus (the single-rate update); imaginary mode ignores
// the rates and uses epsilon.
WeightPair resolve_weights(const TransitionRates& rates, const LatticeSpec& spec,
                           const StepWeight& weight);

// One update of the two-direction master equation:
//   next(site, d) = stay * prev(site - d, d) + flip * prev(site + d, flip(d)).
// Out-of-range neighbours contribute zero under absorbing boundaries and wrap
// under periodic ones. The signed sum is conserved (stay + flip = 1).
DirectedAmplitudeField step_simple(const DirectedAmplitudeField& field,
                                   const TransitionRates& rates, const LatticeSpec& spec,
                                   const StepWeight& weight);

DirectedAmplitudeField evolve_simple(DirectedAmplitudeField field,
                                     const TransitionRates& rates, const LatticeSpec& spec,
                                     int steps, const StepWeight& weight);

// A lattice path of n steps: direction state d_0 .. d_n with d_0 fixed at
// start_dir, displacement = sum of sign(d_k) for k < n (motion follows the
// direction held during each step), reversals = count of k with d_{k+1} != d_k.
struct PathQuery {
  int n = 0;
  Direction start_dir = Direction::plus;
  Direction end_dir = Direction::plus;
  int displacement = 0;  // in units of delta_z
  std::optional<int> reversal_count;  // restrict to paths with exactly R reversals

  PathQuery(int steps, Direction start, Direction end, int disp,
            std::optional<int> reversals = std::nullopt);
};

// N(R) for R = 0..n: number of admissible paths with R reversals. Exhaustive
// enumeration, exact integer counts. Enumeration bound n <= 24.
std::vector<std::uint64_t> path_reversal_histogram(const PathQuery& query);

// Sum over admissible paths of stay^(n-R) * flip^R. Parity-infeasible or
// unreachable queries return exactly zero; that is a result, not an error.
Complex path_sum_amplitude(const PathQuery& query, const TransitionRates& rates,
                           const LatticeSpec& spec, const StepWeight& weight);

// Forward-time and backward-time amplitude pair at one time index.
struct CausalFieldPair {
  DirectedAmplitudeField z_field;
  DirectedAmplitudeField zbar_field;
  long time_index = 0;

  CausalFieldPair(DirectedAmplitudeField z, DirectedAmplitudeField zbar, long t_index);

  static CausalFieldPair zeros(const LatticeSpec& spec, ScalarKind kind, long t_index = 0);
};

// One step of the coupled forward/backward system. The future backward field
// is eliminated through the causality constraint, leaving one 2x2 linear
// solve per site (singular only when zeta_plus * zeta_minus * dt^2 == 1);
// the backward field at the new time is then rebuilt from the constraint.
// Per-site work is independent, so sweep order cannot affect the result.
CausalFieldPair step_causal(const CausalFieldPair& pair, const TransitionRates& rates,
                            const LatticeSpec& spec);

// Max over sites and signs of |z(site, d) - zbar(site + d, flip(d))| between
// two adjacent time indices: the causality-constraint defect.
double causality_residual(const CausalFieldPair& at_t, const CausalFieldPair& next,
                          const LatticeSpec& spec);

// Residuals of the three defining relations across one completed step: the
// forward update, the backward update, and the constraint. The first two are
// evaluated at the new time with future backward terms routed through the
// constraint (the only alignment in which all terms exist after one step).
struct CausalResiduals {
  double forward_eq = 0.0;
  double backward_eq = 0.0;
  double constraint = 0.0;

  double max() const;
};

CausalResiduals causal_step_residuals(const CausalFieldPair& at_t,
                                      const CausalFieldPair& next,
                                      const TransitionRates& rates,
                                      const LatticeSpec& spec);

}  // namespace checkerboard
