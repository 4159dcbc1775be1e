#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "checkerboard/spectral.hpp"

namespace checkerboard {

// External four-potential (a0, a) with coupling charge. Constant by default;
// the sampled representation carries per-cell values on a (z, t) grid and is
// consumed only by the position-space residual.
struct FourPotential {
  enum class Representation { constant, sampled };

  double a0 = 0.0;
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  double charge = 0.0;
  Representation rep = Representation::constant;

  // sampled grids, index j * num_z + n; sizes checked on use
  int num_z = 0;
  int num_t = 0;
  std::vector<double> a0_samples, ax_samples, ay_samples, az_samples;

  static FourPotential constant(double a0, const Eigen::Vector3d& a, double charge);
};

// p -> p - e a, E -> E - e a0; mass unchanged, magnitude recomputed.
// Affine, undone by the same potential with opposite charge. Constant
// representation only.
MomentumPoint minimal_couple(const MomentumPoint& pt, const FourPotential& pot);

struct PotentialDiracResult {
  FourBlock hamiltonian;           // dirac_form at the kinetic momentum p - e a
  double det_residual = 0.0;       // |det(H_A - (E - e a0) I)|
};

PotentialDiracResult dirac_with_potential(const MomentumPoint& pt, const FourPotential& pot,
                                          double mass);

struct SpaceTimeGrid {
  int num_z = 0;
  int num_t = 0;
  double dz = 0.0;
  double dt = 0.0;

  SpaceTimeGrid(int nz, int nt, double dz_, double dt_);
};

// One plane-wave component: full momentum/energy data plus a 4-spinor weight.
struct SpinorMode {
  MomentumPoint point;
  Eigen::Vector4cd amplitude;
};

// 4-component field on the (z, t) grid. Only the z axis is sampled; the
// transverse momentum pair rides along as metadata and enters derivatives
// algebraically.
struct SpinorField {
  SpaceTimeGrid grid;
  double px = 0.0;
  double py = 0.0;
  std::vector<Eigen::Vector4cd> values;  // index j * num_z + n

  explicit SpinorField(SpaceTimeGrid g);
  Eigen::Vector4cd& at(int n, int j) { return values[static_cast<size_t>(j) * grid.num_z + n]; }
  const Eigen::Vector4cd& at(int n, int j) const {
    return values[static_cast<size_t>(j) * grid.num_z + n];
  }
};

// psi(z, t) = sum over modes of amplitude * exp(i (p_z z - E t)). All modes
// must share the transverse components (they become the field's metadata).
SpinorField plane_wave_synthesize(std::span<const SpinorMode> modes,
                                  const SpaceTimeGrid& grid);

enum class TimeStencil { central2, central4 };

// Defect of the coupled first-order system
//   [alpha . (-i grad - e a) + beta m] psi - (i d_t - e a0) psi,
// max-norm over all z and interior t slices. d_z is spectral (periodic z);
// transverse derivatives act algebraically through the field's (px, py);
// d_t uses central differences, by default the two-stride Richardson
// combination (fourth order), since the plain second-order stencil floors
// near 1e-10 on representative grids.
double position_space_residual(const SpinorField& psi, const FourPotential& pot,
                               double mass, TimeStencil stencil = TimeStencil::central4);

}  // namespace checkerboard
