#include "checkerboard/gauge.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "checkerboard/parallel.hpp"

namespace checkerboard {

FourPotential FourPotential::constant(double a0, const Eigen::Vector3d& a, double charge) {
  FourPotential pot;
  pot.a0 = a0;
  pot.a = a;
  pot.charge = charge;
  if (!std::isfinite(a0) || !a.allFinite() || !std::isfinite(charge))
    throw std::invalid_argument("potential entries must be finite");
  return pot;
}

MomentumPoint minimal_couple(const MomentumPoint& pt, const FourPotential& pot) {
  if (pot.rep != FourPotential::Representation::constant)
    throw std::invalid_argument("minimal coupling acts pointwise on constant potentials only");
  const Eigen::Vector3d p = pt.p_vec - pot.charge * pot.a;
  const double e = pt.energy - pot.charge * pot.a0;
  return {p, e, pt.mass};
}

PotentialDiracResult dirac_with_potential(const MomentumPoint& pt, const FourPotential& pot,
                                          double mass) {
  if (pot.rep != FourPotential::Representation::constant)
    throw std::invalid_argument("momentum-space coupling needs a constant potential");
  const Eigen::Vector3d kinetic = pt.p_vec - pot.charge * pot.a;
  const double shifted_energy = pt.energy - pot.charge * pot.a0;
  PotentialDiracResult result;
  result.hamiltonian = dirac_form(kinetic, mass);
  const FourBlock shifted = result.hamiltonian - shifted_energy * FourBlock::Identity();
  result.det_residual = std::abs(shifted.determinant());
  return result;
}

SpaceTimeGrid::SpaceTimeGrid(int nz, int nt, double dz_, double dt_)
    : num_z(nz), num_t(nt), dz(dz_), dt(dt_) {
  if (nz < 2 || nt < 1) throw std::invalid_argument("grid must have >= 2 sites and >= 1 slice");
  if (!(dz_ > 0.0) || !(dt_ > 0.0) || !std::isfinite(dz_) || !std::isfinite(dt_))
    throw std::invalid_argument("grid spacings must be positive");
}

SpinorField::SpinorField(SpaceTimeGrid g)
    : grid(g),
      values(static_cast<size_t>(g.num_z) * static_cast<size_t>(g.num_t),
             Eigen::Vector4cd::Zero()) {}

SpinorField plane_wave_synthesize(std::span<const SpinorMode> modes,
                                  const SpaceTimeGrid& grid) {
  if (modes.empty()) throw std::invalid_argument("synthesis needs at least one mode");
  SpinorField psi(grid);
  psi.px = modes[0].point.p_vec.x();
  psi.py = modes[0].point.p_vec.y();
  for (const SpinorMode& mode : modes) {
    if (mode.point.p_vec.x() != psi.px || mode.point.p_vec.y() != psi.py)
      throw std::invalid_argument("all modes must share the transverse momentum pair");
  }
  for (int j = 0; j < grid.num_t; ++j) {
    const double t = j * grid.dt;
    for (int n = 0; n < grid.num_z; ++n) {
      const double z = n * grid.dz;
      Eigen::Vector4cd acc = Eigen::Vector4cd::Zero();
      for (const SpinorMode& mode : modes) {
        const double phase = mode.point.p_vec.z() * z - mode.point.energy * t;
        acc += mode.amplitude * std::polar(1.0, phase);
      }
      psi.at(n, j) = acc;
    }
  }
  return psi;
}

namespace {

FourBlock alpha_of(const TwoBlock& sigma) {
  FourBlock a = FourBlock::Zero();
  a.topRightCorner<2, 2>() = sigma;
  a.bottomLeftCorner<2, 2>() = sigma;
  return a;
}

FourBlock beta_matrix() {
  FourBlock b = FourBlock::Zero();
  b.topLeftCorner<2, 2>() = TwoBlock::Identity();
  b.bottomRightCorner<2, 2>() = -TwoBlock::Identity();
  return b;
}

// signed momentum of DFT bin k on an nz-point ring; Nyquist bin zeroed so the
// derivative of real-representable data stays conjugate symmetric
double signed_frequency(int k, int nz, double dz) {
  if (2 * k == nz) return 0.0;
  const int wrapped = 2 * k < nz ? k : k - nz;
  return 2.0 * std::numbers::pi * wrapped / (nz * dz);
}

// per-slice spectral d/dz of every spinor component, dense transforms with a
// shared root table
std::vector<Eigen::Vector4cd> spectral_dz(const SpinorField& psi) {
  const int nz = psi.grid.num_z;
  const int nt = psi.grid.num_t;
  std::vector<Complex> roots(static_cast<size_t>(nz));
  for (int r = 0; r < nz; ++r) {
    const double ang = 2.0 * std::numbers::pi * r / nz;
    roots[static_cast<size_t>(r)] = Complex(std::cos(ang), std::sin(ang));
  }
  std::vector<Eigen::Vector4cd> dz(psi.values.size(), Eigen::Vector4cd::Zero());
  const size_t work = static_cast<size_t>(nt) * 8 * static_cast<size_t>(nz) * nz;
  parallel_for(
      static_cast<size_t>(nt),
      [&](size_t lo, size_t hi) {
        std::vector<Complex> spectrum(static_cast<size_t>(nz));
        for (size_t j = lo; j < hi; ++j) {
          for (int c = 0; c < 4; ++c) {
            for (int k = 0; k < nz; ++k) {
              Complex acc = 0.0;
              for (int n = 0; n < nz; ++n)
                acc += psi.at(n, static_cast<int>(j))[c] *
                       std::conj(roots[static_cast<size_t>((static_cast<long>(k) * n) % nz)]);
              spectrum[static_cast<size_t>(k)] =
                  acc / static_cast<double>(nz) *
                  Complex(0.0, signed_frequency(k, nz, psi.grid.dz));
            }
            for (int n = 0; n < nz; ++n) {
              Complex acc = 0.0;
              for (int k = 0; k < nz; ++k)
                acc += spectrum[static_cast<size_t>(k)] *
                       roots[static_cast<size_t>((static_cast<long>(k) * n) % nz)];
              dz[j * static_cast<size_t>(nz) + static_cast<size_t>(n)][c] = acc;
            }
          }
        }
      },
      work >= (1u << 20) ? 1 : static_cast<size_t>(nt) + 1);
  return dz;
}

}  // namespace

double position_space_residual(const SpinorField& psi, const FourPotential& pot,
                               double mass, TimeStencil stencil) {
  const int nz = psi.grid.num_z;
  const int nt = psi.grid.num_t;
  const int margin = stencil == TimeStencil::central2 ? 1 : 2;
  if (nt < 2 * margin + 1)
    throw std::invalid_argument("too few time slices for the chosen stencil");
  if (psi.values.size() != static_cast<size_t>(nz) * static_cast<size_t>(nt))
    throw std::invalid_argument("field storage does not match its grid");

  const bool sampled = pot.rep == FourPotential::Representation::sampled;
  if (sampled) {
    const size_t cells = static_cast<size_t>(nz) * static_cast<size_t>(nt);
    if (pot.num_z != nz || pot.num_t != nt || pot.a0_samples.size() != cells ||
        pot.ax_samples.size() != cells || pot.ay_samples.size() != cells ||
        pot.az_samples.size() != cells)
      throw std::invalid_argument("sampled potential does not cover the field grid");
  }
  const double e = pot.charge;
  const auto cell = [nz](int n, int j) {
    return static_cast<size_t>(j) * static_cast<size_t>(nz) + static_cast<size_t>(n);
  };

  const FourBlock ax = alpha_of(pauli_x());
  const FourBlock ay = alpha_of(pauli_y());
  const FourBlock az = alpha_of(pauli_z());
  const FourBlock beta = beta_matrix();
  const std::vector<Eigen::Vector4cd> dz = spectral_dz(psi);
  const Complex i(0.0, 1.0);

  std::vector<double> slice_max(static_cast<size_t>(nt), 0.0);
  const size_t work = static_cast<size_t>(nt) * static_cast<size_t>(nz) * 512;
  parallel_for(
      static_cast<size_t>(nt),
      [&](size_t lo, size_t hi) {
        for (size_t js = lo; js < hi; ++js) {
          const int j = static_cast<int>(js);
          if (j < margin || j >= nt - margin) continue;
          double worst = 0.0;
          for (int n = 0; n < nz; ++n) {
            const double pa0 = sampled ? pot.a0_samples[cell(n, j)] : pot.a0;
            const double pax = sampled ? pot.ax_samples[cell(n, j)] : pot.a.x();
            const double pay = sampled ? pot.ay_samples[cell(n, j)] : pot.a.y();
            const double paz = sampled ? pot.az_samples[cell(n, j)] : pot.a.z();

            const Eigen::Vector4cd& value = psi.at(n, j);
            const Eigen::Vector4cd pi_x = (psi.px - e * pax) * value;
            const Eigen::Vector4cd pi_y = (psi.py - e * pay) * value;
            const Eigen::Vector4cd pi_z = -i * dz[cell(n, j)] - (e * paz) * value;
            const Eigen::Vector4cd lhs =
                ax * pi_x + ay * pi_y + az * pi_z + mass * (beta * value);

            Eigen::Vector4cd dt_psi;
            if (stencil == TimeStencil::central2) {
              dt_psi = (psi.at(n, j + 1) - psi.at(n, j - 1)) / (2.0 * psi.grid.dt);
            } else {
              dt_psi = (8.0 * (psi.at(n, j + 1) - psi.at(n, j - 1)) -
                        (psi.at(n, j + 2) - psi.at(n, j - 2))) /
                       (12.0 * psi.grid.dt);
            }
            const Eigen::Vector4cd rhs = i * dt_psi - (e * pa0) * value;
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
          }
          slice_max[js] = worst;
        }
      },
      work >= (1u << 20) ? 1 : static_cast<size_t>(nt) + 1);

  double residual = 0.0;
  for (double v : slice_max) residual = std::max(residual, v);
  return residual;
}

}  // namespace checkerboard
