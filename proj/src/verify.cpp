#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "checkerboard/continuum.hpp"
#include "checkerboard/gauge.hpp"
#include "checkerboard/lattice.hpp"
#include "checkerboard/spectral.hpp"

namespace checkerboard {

namespace {

constexpr double half_pi = std::numbers::pi / 2.0;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// 53-bit uniform draw; bit-stable across standard libraries, unlike the
// std distributions
struct Draw {
  std::mt19937_64 gen;

  explicit Draw(std::uint64_t seed) : gen(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  Eigen::Vector3d vec(double lo, double hi) {
    const double x = uniform(lo, hi);
    const double y = uniform(lo, hi);
    const double z = uniform(lo, hi);
    return {x, y, z};
  }
};

double path_oracle_residual(const StepWeight& weight, int max_n) {
  const TransitionRates rates = TransitionRates::symmetric(0.5);
  const ScalarKind kind =
      weight.mode == WeightMode::real ? ScalarKind::real : ScalarKind::cplx;
  double worst = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const int sites = 2 * n + 3;  // wide enough that nothing wraps
    const LatticeSpec spec(0.1, sites);
    const int center = sites / 2;
    for (Direction start : {Direction::plus, Direction::minus}) {
      const auto evolved = evolve_simple(
          DirectedAmplitudeField::point_source(sites, center, start, kind), rates, spec, n,
          weight);
      for (int site = 0; site < sites; ++site) {
        for (Direction end : {Direction::plus, Direction::minus}) {
          const Complex by_paths = path_sum_amplitude(
              PathQuery(n, start, end, site - center), rates, spec, weight);
          worst = std::max(worst, std::abs(evolved.at(site, end) - by_paths));
        }
      }
    }
  }
  return worst;
}

double conservation_simple_residual() {
  const int sites = 128;
  const LatticeSpec spec(0.1, sites);
  const TransitionRates rates = TransitionRates::symmetric(0.5);
  auto field =
      DirectedAmplitudeField::point_source(sites, sites / 2, Direction::plus, ScalarKind::real);
  const Complex s0 = field.sum();
  double drift = 0.0;
  for (int step = 0; step < 2000; ++step) {
    field = step_simple(field, rates, spec, StepWeight::real());
    drift = std::max(drift, std::abs(field.sum() - s0));
  }
  return drift;
}

double conservation_imaginary_residual() {
  const int sites = 64;
  const LatticeSpec spec(0.1, sites);
  const TransitionRates rates = TransitionRates::symmetric(0.5);
  auto field =
      DirectedAmplitudeField::point_source(sites, sites / 2, Direction::plus, ScalarKind::cplx);
  const Complex s0 = field.sum();
  double drift = 0.0;
  for (int step = 0; step < 200; ++step) {
    field = step_simple(field, rates, spec, StepWeight::imaginary(0.05));
    double scale = 0.0;  // L1 norm; the field itself grows, the sum does not
    for (int site = 0; site < sites; ++site)
      for (Direction d : {Direction::plus, Direction::minus})
        scale += std::abs(field.at(site, d));
    drift = std::max(drift, std::abs(field.sum() - s0) / scale);
  }
  return drift;
}

CausalFieldPair gaussian_pair(const LatticeSpec& spec, double width, int kmode) {
  auto pair = CausalFieldPair::zeros(spec, ScalarKind::cplx);
  const double length = spec.num_sites * spec.delta_z();
  const double k = 2.0 * std::numbers::pi * kmode / length;
  for (int site = 0; site < spec.num_sites; ++site) {
    const double x = site * spec.delta_z() - length / 2.0;
    pair.z_field.at(site, Direction::plus) =
        std::exp(-x * x / (width * width)) * std::polar(1.0, k * x);
  }
  return pair;
}

double causality_run_residual() {
  const LatticeSpec spec(0.01, 64);
  const TransitionRates rates(0.3, 0.1);
  auto pair = CausalFieldPair::zeros(spec, ScalarKind::cplx);
  pair.z_field.at(32, Direction::plus) = 1.0;
  double worst = 0.0;
  for (int step = 0; step < 200; ++step) {
    const auto next = step_causal(pair, rates, spec);
    worst = std::max(worst, causality_residual(pair, next, spec));
    pair = next;
  }
  return worst;
}

double three_equation_residual() {
  const LatticeSpec spec(0.05, 128);
  const TransitionRates rates(0.3, 0.1);
  auto pair = gaussian_pair(spec, 1.2, 4);
  double worst = 0.0;
  for (int step = 0; step < 50; ++step) {
    const auto next = step_causal(pair, rates, spec);
    worst = std::max(worst, causal_step_residuals(pair, next, rates, spec).max());
    pair = next;
  }
  return worst;
}

double mode_constraint_check() {
  // 3-4-5 on-shell point; amplitudes from the 2x2 eigenvector rays
  const MomentumPoint pt({0.0, 0.0, 3.0}, 5.0, 4.0);
  const TransitionRates rates(4.0, 0.0);
  ModeAmplitudes modes;
  modes.a_plus = Complex(0.0, -2.0);
  modes.a_minus = 1.0;
  modes.abar_plus = Complex(0.0, 1.0);
  modes.abar_minus = 2.0;
  return mode_constraint_residual(modes, pt, rates);
}

double involutions_residual(Draw& rng) {
  double worst = 0.0;
  const FourBlock swap2 = middle_swap();
  worst = std::max(worst, (swap2 * swap2 - FourBlock::Identity()).cwiseAbs().maxCoeff());
  const FourBlock had = block_hadamard();
  worst =
      std::max(worst, (had * had.transpose() - FourBlock::Identity()).cwiseAbs().maxCoeff());
  for (int trial = 0; trial < 50; ++trial) {
    const double phi = rng.uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    const TwoBlock phase = phase_block(phi);
    worst = std::max(worst,
                     (phase * phase.adjoint() - TwoBlock::Identity()).cwiseAbs().maxCoeff());
    worst = std::max(
        worst, (phase * phase_block(-phi) - TwoBlock::Identity()).cwiseAbs().maxCoeff());
    const double theta = rng.uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    TwoBlock reflect;
    reflect << std::cos(theta / 2.0), std::sin(theta / 2.0), std::sin(theta / 2.0),
        -std::cos(theta / 2.0);
    worst = std::max(worst,
                     (reflect * reflect - TwoBlock::Identity()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double bilinearization_check(Draw& rng) {
  double worst = 0.0;
  const Eigen::Vector3d axes[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                  {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
  for (const auto& axis : axes)
    worst = std::max(worst, bilinearization_residual(3.7 * axis));
  for (int trial = 0; trial < 1000; ++trial)
    worst = std::max(worst, bilinearization_residual(rng.vec(-5.0, 5.0)));
  for (int trial = 0; trial < 100; ++trial)
    worst = std::max(worst, bilinearization_residual(rng.vec(-1e-8, 1e-8)));
  return worst;
}

FourBlock direct_dirac(const Eigen::Vector3d& p, double m) {
  TwoBlock s;
  s << p.z(), Complex(p.x(), -p.y()), Complex(p.x(), p.y()), -p.z();
  FourBlock h = FourBlock::Zero();
  h.topLeftCorner<2, 2>() = m * TwoBlock::Identity();
  h.bottomRightCorner<2, 2>() = -m * TwoBlock::Identity();
  h.topRightCorner<2, 2>() = s;
  h.bottomLeftCorner<2, 2>() = s;
  return h;
}

double chain_exactness_check(Draw& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Vector3d p = rng.vec(-5.0, 5.0);
    const double m = rng.uniform(0.0, 5.0);
    worst = std::max(worst, (dirac_form(p, m) - direct_dirac(p, m)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double chain_eigenvalue_check(Draw& rng, const Eigen::Vector3d& chain_p, double chain_m) {
  double worst = 0.0;
  const auto deviation = [](const Eigen::Vector3d& p, double m) {
    const double e = std::sqrt(p.squaredNorm() + m * m);
    const Eigen::Vector4d eig = eig4(dirac_form(p, m));
    const Eigen::Vector4d expect(e, e, -e, -e);
    return (eig - expect).cwiseAbs().maxCoeff();
  };
  worst = std::max(worst, deviation(chain_p, chain_m));
  for (int trial = 0; trial < 1000; ++trial)
    worst = std::max(worst, deviation(rng.vec(-5.0, 5.0), rng.uniform(0.0, 5.0)));
  return worst;
}

double phase_assembly_check(Draw& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto pt =
        MomentumPoint::on_shell(rng.vec(-5.0, 5.0), rng.uniform(0.0, 5.0));
    const TwoBlock phase = phase_block(half_pi);
    const TwoBlock top = phase * build_two_block(pt, ModeBranch::forward) * phase.adjoint();
    const TwoBlock bottom = phase.conjugate() * build_two_block(pt, ModeBranch::backward) *
                            phase.conjugate().adjoint();
    FourBlock assembled = FourBlock::Zero();
    assembled.topLeftCorner<2, 2>() = top;
    assembled.bottomRightCorner<2, 2>() = bottom;
    worst = std::max(worst,
                     (assembled - assemble_intermediate(pt)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double regrouping_check(Draw& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto pt =
        MomentumPoint::on_shell(rng.vec(-5.0, 5.0), rng.uniform(0.0, 5.0));
    const double p = pt.p_mag;
    const double m = pt.mass;
    FourBlock grouped = FourBlock::Zero();
    grouped(0, 0) = p;
    grouped(0, 2) = -m;
    grouped(1, 1) = -p;
    grouped(1, 3) = -m;
    grouped(2, 0) = -m;
    grouped(2, 2) = -p;
    grouped(3, 1) = -m;
    grouped(3, 3) = p;
    worst = std::max(
        worst,
        (sigma_conjugate(assemble_intermediate(pt)) - grouped).cwiseAbs().maxCoeff());
  }
  return worst;
}

MomentumPoint random_on_shell(Draw& rng) {
  Eigen::Vector3d dir = rng.vec(-1.0, 1.0);
  if (dir.norm() < 1e-3) dir = Eigen::Vector3d(1.0, 0.0, 0.0);
  dir.normalize();
  const double mag = rng.uniform(0.5, 3.0);
  const double m = rng.uniform(0.0, 3.0);
  const int branch = rng.uniform(0.0, 1.0) < 0.5 ? +1 : -1;
  return MomentumPoint::on_shell(mag * dir, m, branch);
}

double dispersion_onshell_check(Draw& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const MomentumPoint pt = random_on_shell(rng);
    const TwoBlock shifted =
        build_two_block(pt, ModeBranch::forward) - pt.energy * TwoBlock::Identity();
    worst = std::max(worst, std::abs(shifted.determinant()));
  }
  return worst;
}

double dispersion_margin_check(Draw& rng) {
  double margin = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 1000; ++trial) {
    const MomentumPoint pt = random_on_shell(rng);
    const MomentumPoint off{pt.p_vec, pt.energy + 1e-3, pt.mass};
    const TwoBlock shifted =
        build_two_block(off, ModeBranch::forward) - off.energy * TwoBlock::Identity();
    margin = std::min(margin, std::abs(shifted.determinant()));
  }
  return margin;
}

double dft_roundtrip_check(Draw& rng) {
  const SpectralWindow window(32, 16, 0.17, 0.09);
  std::vector<Complex> field(static_cast<size_t>(window.size()));
  for (auto& v : field) v = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  double worst = 0.0;
  for (ModeBranch branch : {ModeBranch::forward, ModeBranch::backward}) {
    const auto back = dft_inverse(dft_forward(field, window, branch), branch);
    for (size_t idx = 0; idx < field.size(); ++idx)
      worst = std::max(worst, std::abs(back[idx] - field[idx]));
  }
  return worst;
}

double dft_spike_check() {
  const SpectralWindow window(24, 12, 0.21, 0.13);
  const int k0 = 5;
  const int j0 = 3;
  std::vector<Complex> field(static_cast<size_t>(window.size()));
  for (int j = 0; j < window.num_t; ++j)
    for (int n = 0; n < window.num_z; ++n)
      field[static_cast<size_t>(j) * window.num_z + n] = std::polar(
          1.0, -(window.momentum(k0) * n * window.dz - window.energy(j0) * j * window.dt));
  const ModeTable table = dft_forward(field, window, ModeBranch::forward);
  double worst = 0.0;
  for (int j = 0; j < window.num_t; ++j)
    for (int k = 0; k < window.num_z; ++k) {
      const Complex expect = (k == k0 && j == j0) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(table.at(k, j) - expect));
    }
  return worst;
}

double minimal_coupling_check(Draw& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const MomentumPoint pt(rng.vec(-4.0, 4.0), rng.uniform(-4.0, 4.0),
                           rng.uniform(0.0, 4.0));
    const auto pot =
        FourPotential::constant(rng.uniform(-2.0, 2.0), rng.vec(-2.0, 2.0),
                                rng.uniform(-2.0, 2.0));
    auto reversed = pot;
    reversed.charge = -pot.charge;
    const MomentumPoint back = minimal_couple(minimal_couple(pt, pot), reversed);
    worst = std::max(worst, (back.p_vec - pt.p_vec).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(back.energy - pt.energy));
  }
  return worst;
}

double gauge_spectrum_check(Draw& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector3d p = rng.vec(-3.0, 3.0);
    const double m = rng.uniform(0.0, 3.0);
    const auto pot =
        FourPotential::constant(rng.uniform(-1.5, 1.5), rng.vec(-1.5, 1.5),
                                rng.uniform(-1.5, 1.5));
    const MomentumPoint pt = MomentumPoint::on_shell(p, m);
    const auto result = dirac_with_potential(pt, pot, m);
    const double kinetic_e =
        std::sqrt((p - pot.charge * pot.a).squaredNorm() + m * m);
    const double shift = pot.charge * pot.a0;
    const Eigen::Vector4d shifted =
        eig4(result.hamiltonian) + shift * Eigen::Vector4d::Ones();
    const Eigen::Vector4d expect(kinetic_e + shift, kinetic_e + shift, -kinetic_e + shift,
                                 -kinetic_e + shift);
    worst = std::max(worst, (shifted - expect).cwiseAbs().maxCoeff());
  }
  return worst;
}

double gauge_position_check() {
  const double mass = 1.5;
  const auto pot = FourPotential::constant(0.3, {0.25, -0.5, 1.0}, 1.0);
  const SpaceTimeGrid grid(64, 64, 2.0 * std::numbers::pi / 64, 5e-4);
  std::vector<SpinorMode> modes;
  for (const double qz : {2.0, -3.0}) {
    const Eigen::Vector3d kinetic(0.75, 0.5, qz);  // canonical p_z lands on the grid
    const double kinetic_e = std::sqrt(kinetic.squaredNorm() + mass * mass);
    Eigen::SelfAdjointEigenSolver<FourBlock> solver(dirac_form(kinetic, mass));
    SpinorMode mode{MomentumPoint(kinetic + pot.charge * pot.a,
                                  kinetic_e + pot.charge * pot.a0, mass),
                    solver.eigenvectors().col(3)};
    modes.push_back(mode);
  }
  const SpinorField psi = plane_wave_synthesize(modes, grid);
  return position_space_residual(psi, pot, mass);
}

struct CheckSpec {
  std::string name;
  double tolerance;
  bool lower_bound;
  std::function<double(Draw&, const VerifyOptions&)> run;
};

std::vector<CheckSpec> make_suite() {
  return {
      {"path-oracle-real", 1e-12, false,
       [](Draw&, const VerifyOptions& o) {
         return path_oracle_residual(StepWeight::real(), o.path_n);
       }},
      {"path-oracle-imaginary", 1e-12, false,
       [](Draw&, const VerifyOptions& o) {
         return path_oracle_residual(StepWeight::imaginary(0.05), o.path_n);
       }},
      {"conservation-simple", 1e-12, false,
       [](Draw&, const VerifyOptions&) { return conservation_simple_residual(); }},
      {"conservation-imaginary", 1e-13, false,
       [](Draw&, const VerifyOptions&) { return conservation_imaginary_residual(); }},
      {"causality", 1e-12, false,
       [](Draw&, const VerifyOptions&) { return causality_run_residual(); }},
      {"three-equation", 1e-12, false,
       [](Draw&, const VerifyOptions&) { return three_equation_residual(); }},
      {"mode-constraint", 1e-12, false,
       [](Draw&, const VerifyOptions&) { return mode_constraint_check(); }},
      {"involutions", 1e-13, false,
       [](Draw& rng, const VerifyOptions&) { return involutions_residual(rng); }},
      {"bilinearization", 1e-12, false,
       [](Draw& rng, const VerifyOptions&) { return bilinearization_check(rng); }},
      {"chain-exactness", 1e-13, false,
       [](Draw& rng, const VerifyOptions&) { return chain_exactness_check(rng); }},
      {"chain-eigenvalues", 1e-10, false,
       [](Draw& rng, const VerifyOptions& o) {
         return chain_eigenvalue_check(rng, o.chain_p, o.chain_m);
       }},
      {"phase-assembly", 1e-13, false,
       [](Draw& rng, const VerifyOptions&) { return phase_assembly_check(rng); }},
      {"regrouping", 1e-13, false,
       [](Draw& rng, const VerifyOptions&) { return regrouping_check(rng); }},
      {"dispersion-onshell", 1e-12, false,
       [](Draw& rng, const VerifyOptions&) { return dispersion_onshell_check(rng); }},
      {"dispersion-margin", 1e-4, true,
       [](Draw& rng, const VerifyOptions&) { return dispersion_margin_check(rng); }},
      {"dft-roundtrip", 1e-12, false,
       [](Draw& rng, const VerifyOptions&) { return dft_roundtrip_check(rng); }},
      {"dft-spike", 1e-12, false,
       [](Draw&, const VerifyOptions&) { return dft_spike_check(); }},
      {"minimal-coupling", 1e-13, false,
       [](Draw& rng, const VerifyOptions&) { return minimal_coupling_check(rng); }},
      {"gauge-spectrum", 1e-10, false,
       [](Draw& rng, const VerifyOptions&) { return gauge_spectrum_check(rng); }},
      {"gauge-position", 1e-10, false,
       [](Draw&, const VerifyOptions&) { return gauge_position_check(); }},
  };
}

bool matches(const std::string& name, const std::string& filter) {
  if (filter.empty()) return true;
  if (name == filter) return true;
  return name.size() > filter.size() && name.compare(0, filter.size(), filter) == 0 &&
         name[filter.size()] == '-';
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const VerifyOptions& opts) {
  if (opts.path_n < 1 || opts.path_n > 16)
    throw std::invalid_argument("path length must be in [1, 16]");
  std::vector<CheckResult> results;
  for (const CheckSpec& spec : make_suite()) {
    if (!matches(spec.name, opts.only)) continue;
    Draw rng(opts.seed ^ fnv1a(spec.name));
    CheckResult result;
    result.name = spec.name;
    result.tolerance = spec.tolerance;
    result.lower_bound = spec.lower_bound;
    result.residual = spec.run(rng, opts);
    result.pass = spec.lower_bound ? result.residual > spec.tolerance
                                   : result.residual <= spec.tolerance;
    results.push_back(result);
  }
  if (results.empty()) throw std::invalid_argument("no check matches '" + opts.only + "'");
  return results;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string report_json(const VerifyOptions& opts, const std::vector<CheckResult>& checks) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"seed\": " << opts.seed << ",\n";
  out << "  \"checks\": [\n";
  for (size_t idx = 0; idx < checks.size(); ++idx) {
    const CheckResult& c = checks[idx];
    out << "    {\n";
    out << "      \"name\": \"" << c.name << "\",\n";
    out << "      \"residual\": " << format_float(c.residual) << ",\n";
    out << "      \"tolerance\": " << format_float(c.tolerance) << ",\n";
    out << "      \"bound\": \"" << (c.lower_bound ? "lower" : "upper") << "\",\n";
    out << "      \"pass\": " << (c.pass ? "true" : "false") << "\n";
    out << "    }" << (idx + 1 < checks.size() ? "," : "") << "\n";
  }
  out << "  ],\n";
  out << "  \"all_pass\": " << (all_pass(checks) ? "true" : "false") << "\n";
  out << "}\n";
  return out.str();
}

}  // namespace checkerboard
