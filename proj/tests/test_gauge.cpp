#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "checkerboard/gauge.hpp"

using namespace checkerboard;

namespace {

constexpr double pi = std::numbers::pi;

// positive-energy eigenspinor of the free hamiltonian at (p, m)
Eigen::Vector4cd positive_spinor(const Eigen::Vector3d& p, double mass) {
  Eigen::SelfAdjointEigenSolver<FourBlock> solver(dirac_form(p, mass));
  return solver.eigenvectors().col(3);  // ascending order, largest last
}

SpinorField garbage_field(const SpaceTimeGrid& grid) {
  SpinorField psi(grid);
  for (int j = 0; j < grid.num_t; ++j) {
    for (int n = 0; n < grid.num_z; ++n) {
      for (int c = 0; c < 4; ++c)
        psi.at(n, j)[c] = Complex(std::sin(1.3 * n + 0.7 * j + c), std::cos(2.1 * n - j + c));
    }
  }
  return psi;
}

}  // namespace

TEST_CASE("potential construction") {
  const FourPotential pot = FourPotential::constant(0.3, {0.25, -0.5, 1.0}, 2.0);
  CHECK(pot.a0 == 0.3);
  CHECK(pot.a.z() == 1.0);
  CHECK(pot.charge == 2.0);
  CHECK(pot.rep == FourPotential::Representation::constant);

  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(FourPotential::constant(inf, {0.0, 0.0, 0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FourPotential::constant(0.0, {0.0, inf, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("minimal coupling shifts momentum and energy") {
  const MomentumPoint pt = MomentumPoint::on_shell({1.0, 2.0, 2.0}, 4.0);
  const FourPotential pot = FourPotential::constant(0.3, {0.25, -0.5, 1.0}, 2.0);

  const MomentumPoint coupled = minimal_couple(pt, pot);
  CHECK(coupled.p_vec.x() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(coupled.p_vec.y() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(coupled.p_vec.z() == doctest::Approx(0.0));
  CHECK(coupled.energy == doctest::Approx(4.4).epsilon(1e-15));
  CHECK(coupled.mass == 4.0);
  CHECK(coupled.p_mag == doctest::Approx(coupled.p_vec.norm()));

  const FourPotential reversed = FourPotential::constant(0.3, {0.25, -0.5, 1.0}, -2.0);
  const MomentumPoint back = minimal_couple(coupled, reversed);
  CHECK(back.p_vec.isApprox(pt.p_vec, 1e-15));
  CHECK(back.energy == doctest::Approx(pt.energy).epsilon(1e-15));

  FourPotential sampled;
  sampled.rep = FourPotential::Representation::sampled;
  CHECK_THROWS_AS(minimal_couple(pt, sampled), std::invalid_argument);
  CHECK_THROWS_AS(dirac_with_potential(pt, sampled, 1.0), std::invalid_argument);
}

TEST_CASE("coupled hamiltonian keeps the shifted energy on shell") {
  SUBCASE("zero potential reduces to the free form") {
    const MomentumPoint pt = MomentumPoint::on_shell({0.0, 0.0, 3.0}, 4.0);
    const FourPotential none = FourPotential::constant(0.0, {0.0, 0.0, 0.0}, 0.0);
    const PotentialDiracResult res = dirac_with_potential(pt, none, 4.0);
    CHECK((res.hamiltonian - dirac_form(pt.p_vec, 4.0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(res.det_residual <= 1e-10);
  }

  SUBCASE("canonical quantities absorb the potential") {
    // kinetic (0, 0, 3), E = 5 behind a constant potential with unit charge
    const FourPotential pot = FourPotential::constant(0.3, {0.25, -0.5, 1.0}, 1.0);
    const MomentumPoint canonical({0.25, -0.5, 4.0}, 5.3, 4.0);
    const PotentialDiracResult res = dirac_with_potential(canonical, pot, 4.0);
    CHECK((res.hamiltonian - dirac_form({0.0, 0.0, 3.0}, 4.0)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(res.det_residual <= 1e-10);

    const MomentumPoint detuned({0.25, -0.5, 4.0}, 5.3 + 1e-2, 4.0);
    CHECK(dirac_with_potential(detuned, pot, 4.0).det_residual > 1e-4);
  }
}

TEST_CASE("space-time grid and spinor field storage") {
  const SpaceTimeGrid grid(4, 3, 0.5, 0.2);
  SpinorField psi(grid);
  CHECK(psi.values.size() == 12);
  CHECK(psi.at(2, 1) == Eigen::Vector4cd::Zero());
  psi.at(2, 1)[0] = Complex(1.0, -1.0);
  CHECK(psi.values[1 * 4 + 2][0] == Complex(1.0, -1.0));

  CHECK_THROWS_AS(SpaceTimeGrid(1, 3, 0.5, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimeGrid(4, 0, 0.5, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimeGrid(4, 3, 0.0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimeGrid(4, 3, 0.5, -0.2), std::invalid_argument);
}

TEST_CASE("plane wave synthesis") {
  const SpaceTimeGrid grid(4, 3, 0.5, 0.2);
  Eigen::Vector4cd amp;
  amp << Complex(1.0, 0.0), Complex(0.0, 2.0), Complex(-1.0, 0.0), Complex(0.5, 0.0);
  const MomentumPoint pt({0.6, 0.8, pi}, 1.3, 0.0);

  SUBCASE("single mode samples the kernel") {
    const SpinorField psi = plane_wave_synthesize(std::vector<SpinorMode>{{pt, amp}}, grid);
    CHECK(psi.px == 0.6);
    CHECK(psi.py == 0.8);
    const Complex kernel = std::polar(1.0, pi * (2 * 0.5) - 1.3 * (1 * 0.2));
    for (int c = 0; c < 4; ++c)
      CHECK(std::abs(psi.at(2, 1)[c] - amp[c] * kernel) <= 1e-15);
  }

  SUBCASE("synthesis is additive in the modes") {
    const MomentumPoint pt2({0.6, 0.8, 2.0 * pi}, -0.7, 0.0);
    Eigen::Vector4cd amp2;
    amp2 << Complex(0.0, 1.0), Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(2.0, -1.0);
    const SpinorField both =
        plane_wave_synthesize(std::vector<SpinorMode>{{pt, amp}, {pt2, amp2}}, grid);
    const SpinorField first = plane_wave_synthesize(std::vector<SpinorMode>{{pt, amp}}, grid);
    const SpinorField second = plane_wave_synthesize(std::vector<SpinorMode>{{pt2, amp2}}, grid);
    for (int j = 0; j < grid.num_t; ++j) {
      for (int n = 0; n < grid.num_z; ++n) {
        CHECK((both.at(n, j) - first.at(n, j) - second.at(n, j)).cwiseAbs().maxCoeff() <=
              1e-15);
      }
    }
  }

  SUBCASE("modes must share the transverse pair") {
    const MomentumPoint other({0.6, -0.8, pi}, 1.3, 0.0);
    CHECK_THROWS_AS(
        plane_wave_synthesize(std::vector<SpinorMode>{{pt, amp}, {other, amp}}, grid),
        std::invalid_argument);
  }

  SUBCASE("at least one mode") {
    CHECK_THROWS_AS(plane_wave_synthesize(std::vector<SpinorMode>{}, grid),
                    std::invalid_argument);
  }
}

TEST_CASE("free plane waves satisfy the position-space system") {
  const int nz = 64;
  const SpaceTimeGrid grid(nz, 12, 2.0 * pi / nz, 5e-4);
  const FourPotential none = FourPotential::constant(0.0, {0.0, 0.0, 0.0}, 0.0);

  SUBCASE("longitudinal momentum only") {
    const MomentumPoint pt = MomentumPoint::on_shell({0.0, 0.0, 3.0}, 4.0);
    const SpinorMode mode{pt, positive_spinor(pt.p_vec, 4.0)};
    const SpinorField psi = plane_wave_synthesize(std::vector<SpinorMode>{mode}, grid);
    CHECK(position_space_residual(psi, none, 4.0) <= 1e-10);
  }

  SUBCASE("transverse components enter algebraically") {
    const MomentumPoint pt = MomentumPoint::on_shell({0.6, 0.8, 3.0}, 4.0);
    const SpinorMode mode{pt, positive_spinor(pt.p_vec, 4.0)};
    const SpinorField psi = plane_wave_synthesize(std::vector<SpinorMode>{mode}, grid);
    CHECK(position_space_residual(psi, none, 4.0) <= 1e-10);
  }

  SUBCASE("a garbage field does not satisfy the system") {
    CHECK(position_space_residual(garbage_field(grid), none, 4.0) > 0.1);
  }
}

TEST_CASE("gauge-shifted plane waves couple through the potential") {
  const int nz = 64;
  const SpaceTimeGrid grid(nz, 12, 2.0 * pi / nz, 5e-4);
  const FourPotential pot = FourPotential::constant(0.3, {0.25, -0.5, 1.0}, 1.0);

  // kinetic momentum q, canonical p = q + e a lands on a grid frequency
  const Eigen::Vector3d q(0.75, 0.5, 2.0);
  const double mass = 1.5;
  const double e_kin = std::sqrt(q.squaredNorm() + mass * mass);
  const MomentumPoint canonical(q + pot.charge * pot.a, e_kin + pot.charge * pot.a0, mass);
  const SpinorMode mode{canonical, positive_spinor(q, mass)};
  const SpinorField psi = plane_wave_synthesize(std::vector<SpinorMode>{mode}, grid);

  SUBCASE("fourth-order time stencil resolves the coupling") {
    CHECK(position_space_residual(psi, pot, mass) <= 1e-10);
  }

  SUBCASE("second-order stencil shows its truncation error") {
    const double second = position_space_residual(psi, pot, mass, TimeStencil::central2);
    const double fourth = position_space_residual(psi, pot, mass, TimeStencil::central4);
    CHECK(second > 1e-8);
    CHECK(second < 1e-4);
    CHECK(fourth < second);
  }

  SUBCASE("a sampled potential with constant cells matches the constant form") {
    FourPotential sampled;
    sampled.rep = FourPotential::Representation::sampled;
    sampled.charge = pot.charge;
    sampled.num_z = grid.num_z;
    sampled.num_t = grid.num_t;
    const std::size_t cells =
        static_cast<std::size_t>(grid.num_z) * static_cast<std::size_t>(grid.num_t);
    sampled.a0_samples.assign(cells, pot.a0);
    sampled.ax_samples.assign(cells, pot.a.x());
    sampled.ay_samples.assign(cells, pot.a.y());
    sampled.az_samples.assign(cells, pot.a.z());
    CHECK(position_space_residual(psi, sampled, mass) ==
          position_space_residual(psi, pot, mass));
  }
}

TEST_CASE("position-space residual validation") {
  const SpaceTimeGrid grid(8, 4, 0.5, 0.01);
  const SpinorField psi(grid);
  const FourPotential none = FourPotential::constant(0.0, {0.0, 0.0, 0.0}, 0.0);

  SUBCASE("the four-point stencil needs five slices") {
    CHECK_THROWS_AS(position_space_residual(psi, none, 1.0), std::invalid_argument);
    CHECK_NOTHROW(position_space_residual(psi, none, 1.0, TimeStencil::central2));
  }

  SUBCASE("two slices cannot hold any stencil") {
    const SpinorField tiny(SpaceTimeGrid(8, 2, 0.5, 0.01));
    CHECK_THROWS_AS(position_space_residual(tiny, none, 1.0, TimeStencil::central2),
                    std::invalid_argument);
  }

  SUBCASE("sampled grids must cover the field") {
    FourPotential sampled;
    sampled.rep = FourPotential::Representation::sampled;
    sampled.num_z = grid.num_z;
    sampled.num_t = grid.num_t + 1;  // wrong extent
    const std::size_t cells = 8 * 5;
    sampled.a0_samples.assign(cells, 0.0);
    sampled.ax_samples.assign(cells, 0.0);
    sampled.ay_samples.assign(cells, 0.0);
    sampled.az_samples.assign(cells, 0.0);
    CHECK_THROWS_AS(position_space_residual(psi, sampled, 1.0, TimeStencil::central2),
                    std::invalid_argument);
  }

  SUBCASE("field storage must match its grid") {
    SpinorField broken(grid);
    broken.values.pop_back();
    CHECK_THROWS_AS(position_space_residual(broken, none, 1.0, TimeStencil::central2),
                    std::invalid_argument);
  }
}
