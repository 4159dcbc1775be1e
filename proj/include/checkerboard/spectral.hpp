#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "checkerboard/continuum.hpp"
#include "checkerboard/lattice.hpp"

namespace checkerboard {

using TwoBlock = Eigen::Matrix2cd;
using FourBlock = Eigen::Matrix4cd;

TwoBlock pauli_x();
TwoBlock pauli_y();
TwoBlock pauli_z();

// A momentum-space sample point: 3-vector, its magnitude, an energy and a mass.
struct MomentumPoint {
  Eigen::Vector3d p_vec = Eigen::Vector3d::Zero();
  double p_mag = 0.0;
  double energy = 0.0;
  double mass = 0.0;

  MomentumPoint(const Eigen::Vector3d& p, double e, double m);

  // energy = branch * sqrt(|p|^2 + m^2)
  static MomentumPoint on_shell(const Eigen::Vector3d& p, double m, int branch = +1);

  double on_shell_defect() const;  // |E^2 - p^2 - m^2|
};

// Both energy roots of E^2 = p^2 + m^2, positive first.
std::pair<double, double> dispersion(const Eigen::Vector3d& p_vec, double mass);

// The two frequency branches of the transform pair: kernel exp(-i(pz - Et))
// resp. exp(-i(pz + Et)).
enum class ModeBranch { forward, backward };

struct SpectralWindow {
  int num_z = 0;
  int num_t = 0;
  double dz = 0.0;
  double dt = 0.0;

  SpectralWindow(int nz, int nt, double dz_, double dt_);

  double momentum(int k) const;  // 2 pi k / (num_z dz)
  double energy(int j) const;    // 2 pi j / (num_t dt)
  int size() const { return num_z * num_t; }
};

// Coefficient table over the (momentum, energy) grid, index (k, j).
struct ModeTable {
  SpectralWindow window;
  std::vector<Complex> coeff;  // coeff[j * num_z + k]

  explicit ModeTable(SpectralWindow w);
  Complex& at(int k, int j) { return coeff[static_cast<size_t>(j) * window.num_z + k]; }
  const Complex& at(int k, int j) const {
    return coeff[static_cast<size_t>(j) * window.num_z + k];
  }
};

// field[j * num_z + n] sampled at z = n dz, t = j dt. Forward transform
// carries the 1/(num_z * num_t) normalization; a single synthesis kernel
// appears as a unit spike. Row-column evaluation, fixed summation order.
ModeTable dft_forward(std::span<const Complex> field, const SpectralWindow& window,
                      ModeBranch branch);
std::vector<Complex> dft_inverse(const ModeTable& table, ModeBranch branch);

// Amplitudes of the two chiral components on both frequency branches at one
// (p, E) grid point.
struct ModeAmplitudes {
  Complex a_plus = 0.0;
  Complex a_minus = 0.0;
  Complex abar_plus = 0.0;
  Complex abar_minus = 0.0;
};

// All four mode tables of a chiral-field history: each component analyzed on
// each branch. Slices must be uniformly spaced and equally sized.
struct ChiralModes {
  SpectralWindow window;
  ModeTable a_plus, a_minus, abar_plus, abar_minus;
};
ChiralModes analyze_chiral_history(std::span<const ChiralField> history,
                                   const LatticeSpec& spec);

// Defect of the four algebraic mode relations at a 1D point p_vec = (0,0,p):
//   -+ i c p a_pm + i E a_pm - (zeta_pm - zeta_mp) a_mp        (forward)
//   -+ i c p abar_pm - i E abar_pm - (zeta_pm - zeta_mp) abar_mp (backward)
// hbar = c = 1. Returns the max of the four absolute values.
double mode_constraint_residual(const ModeAmplitudes& modes, const MomentumPoint& pt,
                                const TransitionRates& rates);

// 2x2 system matrix for one branch: forward is p * sigma_z + m * sigma_y
// with p = p_mag; backward is its negative.
TwoBlock build_two_block(const MomentumPoint& pt, ModeBranch branch);

// diag(e^{-i phi/2}, e^{+i phi/2})
TwoBlock phase_block(double phi);

constexpr double default_phase = 3.0 * 1.5707963267948966;  // 3 pi / 2

// Rephase the components: forward pair by phase_block(phi), backward pair by
// the conjugate convention.
ModeAmplitudes phase_transform(const ModeAmplitudes& modes, double phi = default_phase);

// The rephased 4x4 system, written out entrywise:
//   [[ p, -m, 0, 0], [-m, -p, 0, 0], [0, 0, -p, -m], [0, 0, -m, p]],
// p = p_mag. Note the sign convention of the off-diagonal mass entries is a
// choice of phi; see the phase tests for the equivalence.
FourBlock assemble_intermediate(const MomentumPoint& pt);

// Permutation exchanging the 2nd and 3rd basis vectors; an involution.
FourBlock middle_swap();

// Similarity transform by middle_swap: regroups the two 2x2 systems into
// block form [[P, -M], [-M, -P]].
FourBlock sigma_conjugate(const FourBlock& h);

// Rotation taking diag(|p|, -|p|) to the full momentum block
//   [[p_z, p_x - i p_y], [p_x + i p_y, -p_z]]:
// first a real reflection U_theta (theta = atan2(sqrt(px^2+py^2), pz)), then
// a diagonal phase U_phi (phi = atan2(py, px); zero when px = py = 0).
struct MomentumRotationChain {
  TwoBlock aligned;   // diag(|p|, -|p|)
  TwoBlock in_plane;  // after the polar reflection
  TwoBlock full;      // sigma . p
  double polar = 0.0;
  double azimuth = 0.0;
};
MomentumRotationChain rotate_momentum_chain(const Eigen::Vector3d& p_vec);
TwoBlock rotate_momentum_block(const Eigen::Vector3d& p_vec);

// (1/sqrt(2)) [[I, -I], [I, I]] acting on the 2x2 blocks.
FourBlock block_hadamard();

// Dirac Hamiltonian in the standard representation,
//   [[m I, sigma.p], [sigma.p, -m I]],
// produced by conjugating the regrouped block form with block_hadamard.
FourBlock dirac_form(const Eigen::Vector3d& p_vec, double mass);

// max-norm of (sigma.p)^2 - |p|^2 I.
double bilinearization_residual(const Eigen::Vector3d& p_vec);

// Eigenvalues of a Hermitian 4x4, descending. Rejects non-Hermitian input
// (max deviation entry above 1e-12).
Eigen::Vector4d eig4(const FourBlock& h);

}  // namespace checkerboard
