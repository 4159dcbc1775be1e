#include "checkerboard/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "checkerboard/parallel.hpp"

namespace checkerboard {

TwoBlock pauli_x() {
  TwoBlock m;
  m << 0, 1, 1, 0;
  return m;
}

TwoBlock pauli_y() {
  TwoBlock m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

TwoBlock pauli_z() {
  TwoBlock m;
  m << 1, 0, 0, -1;
  return m;
}

MomentumPoint::MomentumPoint(const Eigen::Vector3d& p, double e, double m)
    : p_vec(p), p_mag(p.norm()), energy(e), mass(m) {
  if (!p.allFinite() || !std::isfinite(e) || !std::isfinite(m))
    throw std::invalid_argument("momentum point entries must be finite");
  if (m < 0.0) throw std::invalid_argument("mass must be nonnegative");
}

MomentumPoint MomentumPoint::on_shell(const Eigen::Vector3d& p, double m, int branch) {
  if (branch != 1 && branch != -1)
    throw std::invalid_argument("energy branch must be +1 or -1");
  const double e = branch * std::sqrt(p.squaredNorm() + m * m);
  return {p, e, m};
}

double MomentumPoint::on_shell_defect() const {
  return std::abs(energy * energy - p_vec.squaredNorm() - mass * mass);
}

std::pair<double, double> dispersion(const Eigen::Vector3d& p_vec, double mass) {
  const double e = std::sqrt(p_vec.squaredNorm() + mass * mass);
  return {e, -e};
}

SpectralWindow::SpectralWindow(int nz, int nt, double dz_, double dt_)
    : num_z(nz), num_t(nt), dz(dz_), dt(dt_) {
  if (nz < 1 || nt < 1) throw std::invalid_argument("spectral window must be nonempty");
  if (!(dz_ > 0.0) || !(dt_ > 0.0))
    throw std::invalid_argument("spectral window spacings must be positive");
}

double SpectralWindow::momentum(int k) const {
  return 2.0 * std::numbers::pi * k / (num_z * dz);
}

double SpectralWindow::energy(int j) const {
  return 2.0 * std::numbers::pi * j / (num_t * dt);
}

ModeTable::ModeTable(SpectralWindow w) : window(w), coeff(static_cast<size_t>(w.size()), 0.0) {}

namespace {

// primitive roots exp(+i 2 pi r / n); phases are exact multiples, so all
// kernel values come from one table and summation order stays fixed
std::vector<Complex> unit_roots(int n) {
  std::vector<Complex> roots(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) {
    const double ang = 2.0 * std::numbers::pi * r / n;
    roots[static_cast<size_t>(r)] = Complex(std::cos(ang), std::sin(ang));
  }
  return roots;
}

// one dense transform pass along the first index of a (fast, slow) layout:
// out(q, s) = sum_r in(r, s) * table[(q * r) % n], table chosen by caller
void dense_pass(std::span<const Complex> in, std::span<Complex> out, int n, int slow,
                const std::vector<Complex>& table, bool conjugate) {
  const size_t work = static_cast<size_t>(slow) * n * n;
  parallel_for(
      static_cast<size_t>(slow),
      [&](size_t lo, size_t hi) {
        for (size_t s = lo; s < hi; ++s) {
          for (int q = 0; q < n; ++q) {
            Complex acc = 0.0;
            for (int r = 0; r < n; ++r) {
              const auto idx = static_cast<size_t>((static_cast<std::int64_t>(q) * r) % n);
              const Complex w = conjugate ? std::conj(table[idx]) : table[idx];
              acc += in[s * static_cast<size_t>(n) + static_cast<size_t>(r)] * w;
            }
            out[s * static_cast<size_t>(n) + static_cast<size_t>(q)] = acc;
          }
        }
      },
      work >= (1u << 20) ? 1 : static_cast<size_t>(slow) + 1);
}

// transpose (a, b) -> (b, a) with in[x * b + y], out[y * a + x]
std::vector<Complex> transpose(std::span<const Complex> in, int a, int b) {
  std::vector<Complex> out(in.size());
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < b; ++y)
      out[static_cast<size_t>(y) * a + x] = in[static_cast<size_t>(x) * b + y];
  return out;
}

}  // namespace

ModeTable dft_forward(std::span<const Complex> field, const SpectralWindow& window,
                      ModeBranch branch) {
  const int nz = window.num_z;
  const int nt = window.num_t;
  if (field.size() != static_cast<size_t>(window.size()))
    throw std::invalid_argument("field size does not match the spectral window");
  const std::vector<Complex> rz = unit_roots(nz);
  const std::vector<Complex> rt = unit_roots(nt);

  // analysis multiplies by the conjugate synthesis kernel. Forward branch
  // kernel exp(-i(pz - Et)): conjugate gives e^{+ipz} e^{-iEt}. Backward
  // branch kernel exp(-i(pz + Et)): conjugate gives e^{+ipz} e^{+iEt}.
  std::vector<Complex> stage(field.size());
  dense_pass(field, stage, nz, nt, rz, /*conjugate=*/false);        // z pass, e^{+i 2pi k n / N}
  std::vector<Complex> flipped = transpose(stage, nt, nz);          // now (t fast, k slow)
  std::vector<Complex> stage2(field.size());
  dense_pass(flipped, stage2, nt, nz, rt,
             /*conjugate=*/branch == ModeBranch::forward);          // t pass
  std::vector<Complex> back = transpose(stage2, nz, nt);            // (k fast, j slow)

  ModeTable out{window};
  const double norm = 1.0 / (static_cast<double>(nz) * static_cast<double>(nt));
  for (size_t i = 0; i < back.size(); ++i) out.coeff[i] = back[i] * norm;
  return out;
}

std::vector<Complex> dft_inverse(const ModeTable& table, ModeBranch branch) {
  const int nz = table.window.num_z;
  const int nt = table.window.num_t;
  const std::vector<Complex> rz = unit_roots(nz);
  const std::vector<Complex> rt = unit_roots(nt);

  // synthesis kernel: e^{-ipz} e^{+iEt} (forward) or e^{-ipz} e^{-iEt}
  // (backward); no normalization on this side
  std::vector<Complex> stage(table.coeff.size());
  dense_pass(table.coeff, stage, nz, nt, rz, /*conjugate=*/true);   // z pass, e^{-i 2pi k n / N}
  std::vector<Complex> flipped = transpose(stage, nt, nz);
  std::vector<Complex> stage2(table.coeff.size());
  dense_pass(flipped, stage2, nt, nz, rt,
             /*conjugate=*/branch == ModeBranch::backward);         // t pass
  return transpose(stage2, nz, nt);
}

ChiralModes analyze_chiral_history(std::span<const ChiralField> history,
                                   const LatticeSpec& spec) {
  if (history.size() < 2) throw std::invalid_argument("mode analysis needs at least 2 slices");
  const double dt_slices = history[1].time - history[0].time;
  if (!(dt_slices > 0.0)) throw std::invalid_argument("history must advance in time");
  for (size_t j = 0; j + 1 < history.size(); ++j) {
    if (std::abs((history[j + 1].time - history[j].time) - dt_slices) >
        1e-12 * std::max(1.0, dt_slices))
      throw std::invalid_argument("history slices must be uniformly spaced");
  }
  const int nz = history[0].values.num_sites();
  const int nt = static_cast<int>(history.size());
  SpectralWindow window(nz, nt, spec.delta_z(), dt_slices);
  std::vector<Complex> plus(static_cast<size_t>(window.size()));
  std::vector<Complex> minus(static_cast<size_t>(window.size()));
  for (int j = 0; j < nt; ++j) {
    if (history[static_cast<size_t>(j)].values.num_sites() != nz)
      throw std::invalid_argument("history slices must share a lattice");
    for (int n = 0; n < nz; ++n) {
      plus[static_cast<size_t>(j) * nz + n] =
          history[static_cast<size_t>(j)].values.at(n, Direction::plus);
      minus[static_cast<size_t>(j) * nz + n] =
          history[static_cast<size_t>(j)].values.at(n, Direction::minus);
    }
  }
  return ChiralModes{window, dft_forward(plus, window, ModeBranch::forward),
                     dft_forward(minus, window, ModeBranch::forward),
                     dft_forward(plus, window, ModeBranch::backward),
                     dft_forward(minus, window, ModeBranch::backward)};
}

double mode_constraint_residual(const ModeAmplitudes& modes, const MomentumPoint& pt,
                                const TransitionRates& rates) {
  if (pt.p_vec.x() != 0.0 || pt.p_vec.y() != 0.0)
    throw std::invalid_argument("mode constraints are one dimensional: p = (0, 0, p_z)");
  const double p = pt.p_vec.z();
  const double e = pt.energy;
  const Complex i(0.0, 1.0);
  const double w_plus = rates.zeta_plus - rates.zeta_minus;
  const double w_minus = -w_plus;

  const Complex r1 = -i * p * modes.a_plus + i * e * modes.a_plus - w_plus * modes.a_minus;
  const Complex r2 = i * p * modes.a_minus + i * e * modes.a_minus - w_minus * modes.a_plus;
  const Complex r3 =
      -i * p * modes.abar_plus - i * e * modes.abar_plus - w_plus * modes.abar_minus;
  const Complex r4 =
      i * p * modes.abar_minus - i * e * modes.abar_minus - w_minus * modes.abar_plus;
  return std::max(std::max(std::abs(r1), std::abs(r2)), std::max(std::abs(r3), std::abs(r4)));
}

TwoBlock build_two_block(const MomentumPoint& pt, ModeBranch branch) {
  const TwoBlock forward = pt.p_mag * pauli_z() + pt.mass * pauli_y();
  return branch == ModeBranch::forward ? forward : TwoBlock(-forward);
}

TwoBlock phase_block(double phi) {
  TwoBlock m = TwoBlock::Zero();
  m(0, 0) = std::polar(1.0, -phi / 2.0);
  m(1, 1) = std::polar(1.0, phi / 2.0);
  return m;
}

ModeAmplitudes phase_transform(const ModeAmplitudes& modes, double phi) {
  const Complex lower = std::polar(1.0, -phi / 2.0);
  const Complex raise = std::polar(1.0, phi / 2.0);
  return {modes.a_plus * lower, modes.a_minus * raise,
          modes.abar_plus * raise, modes.abar_minus * lower};
}

FourBlock assemble_intermediate(const MomentumPoint& pt) {
  const double p = pt.p_mag;
  const double m = pt.mass;
  FourBlock h = FourBlock::Zero();
  h(0, 0) = p;
  h(0, 1) = -m;
  h(1, 0) = -m;
  h(1, 1) = -p;
  h(2, 2) = -p;
  h(2, 3) = -m;
  h(3, 2) = -m;
  h(3, 3) = p;
  return h;
}

FourBlock middle_swap() {
  FourBlock s = FourBlock::Zero();
  s(0, 0) = 1;
  s(1, 2) = 1;
  s(2, 1) = 1;
  s(3, 3) = 1;
  return s;
}

FourBlock sigma_conjugate(const FourBlock& h) {
  const FourBlock s = middle_swap();
  return s * h * s;
}

MomentumRotationChain rotate_momentum_chain(const Eigen::Vector3d& p_vec) {
  if (!p_vec.allFinite()) throw std::invalid_argument("momentum must be finite");
  MomentumRotationChain chain;
  const double r = p_vec.norm();
  const double transverse = std::hypot(p_vec.x(), p_vec.y());
  chain.polar = std::atan2(transverse, p_vec.z());
  chain.azimuth = std::atan2(p_vec.y(), p_vec.x());  // 0 when px = py = 0

  chain.aligned = TwoBlock::Zero();
  chain.aligned(0, 0) = r;
  chain.aligned(1, 1) = -r;

  const double c = std::cos(chain.polar / 2.0);
  const double s = std::sin(chain.polar / 2.0);
  TwoBlock u_polar;
  u_polar << c, s, s, -c;  // real reflection, its own inverse
  chain.in_plane = u_polar * chain.aligned * u_polar;

  const TwoBlock u_azimuth = phase_block(chain.azimuth);
  chain.full = u_azimuth * chain.in_plane * u_azimuth.adjoint();
  return chain;
}

TwoBlock rotate_momentum_block(const Eigen::Vector3d& p_vec) {
  return rotate_momentum_chain(p_vec).full;
}

FourBlock block_hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  FourBlock r = FourBlock::Zero();
  r(0, 0) = s;
  r(1, 1) = s;
  r(0, 2) = -s;
  r(1, 3) = -s;
  r(2, 0) = s;
  r(3, 1) = s;
  r(2, 2) = s;
  r(3, 3) = s;
  return r;
}

FourBlock dirac_form(const Eigen::Vector3d& p_vec, double mass) {
  if (mass < 0.0) throw std::invalid_argument("mass must be nonnegative");
  const TwoBlock p_block = rotate_momentum_block(p_vec);
  FourBlock grouped = FourBlock::Zero();
  grouped.topLeftCorner<2, 2>() = p_block;
  grouped.bottomRightCorner<2, 2>() = -p_block;
  grouped.topRightCorner<2, 2>() = -mass * TwoBlock::Identity();
  grouped.bottomLeftCorner<2, 2>() = -mass * TwoBlock::Identity();
  const FourBlock r = block_hadamard();
  return r * grouped * r.transpose();
}

double bilinearization_residual(const Eigen::Vector3d& p_vec) {
  const TwoBlock p_block = rotate_momentum_block(p_vec);
  const TwoBlock defect = p_block * p_block - p_vec.squaredNorm() * TwoBlock::Identity();
  return defect.cwiseAbs().maxCoeff();
}

Eigen::Vector4d eig4(const FourBlock& h) {
  const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-12) throw std::domain_error("eig4 expects a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<FourBlock> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen decomposition failed");
  return solver.eigenvalues().reverse();
}

}  // namespace checkerboard
