// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "reslab/billiard.hpp"
#include "reslab/scattering.hpp"

using namespace reslab;

namespace
{

constexpr double kPi = 3.141592653589793;

// Lattice eigenvalue of the sealed 3x3 box, for placing test energies in
// spectral gaps (or exactly on an eigenvalue).
double fd_box_eig(int n, int m, double hx, double hy)
{
  auto part = [](int q, double h) {
    const double s = std::sin(q * kPi * h / 6.0);
    return 4.0 / (h * h) * s * s;
  };
  return part(n, hx) + part(m, hy);
}

BilliardGeometry sealed_box()
{
  BilliardGeometry g;
  g.slide_w = 0.5;
  g.scatterer_enabled = false;
  return g;
}

} // namespace

TEST_CASE("discrete transverse thresholds approach the continuum ones")
{
  // (4/h^2) sin^2(c pi h / 2) at h = 0.05
  CHECK(discrete_threshold(1, 0.05) == doctest::Approx(9.8493295).epsilon(1e-6));
  CHECK(discrete_threshold(2, 0.05) == doctest::Approx(39.1548).epsilon(1e-4));
  // second-order approach: (c pi)^2 - mu_c ~ (c pi)^4 h^2 / 12
  for (int c : {1, 2})
  {
    const double exact = c * c * kPi * kPi;
    const double gap_1 = exact - discrete_threshold(c, 0.05);
    const double gap_2 = exact - discrete_threshold(c, 0.025);
    CHECK(gap_1 / gap_2 == doctest::Approx(4.0).epsilon(0.01));
  }
}

TEST_CASE("sealed slide reflects with amplitude exactly -1 at the mouth")
{
  // With the slide fully closed the lead is a stub with a hard wall at the
  // mouth: the wave returns with a pure sign flip once the amplitude is
  // referenced back to the mouth plane. This holds for every in-window
  // energy and pins down the plane-to-mouth phase referencing exactly.
  const BilliardGeometry g = sealed_box();
  DiscretizationParams d;
  d.h = 0.1;
  for (double E : {12.5, 16.5, 25.0, 33.5})
  {
    const ScatteringSolution s = scattering_solve(g, d, E);
    CHECK(std::abs(s.R_amp - Complex(-1.0, 0.0)) < 1e-9);
    CHECK(s.S.rows() == 1);
    CHECK(s.S(0, 0) == s.R_amp);
    CHECK(s.k == doctest::Approx(std::sqrt(E - kThreshold1)));
    // the cavity is decoupled, so no amplitude leaks inside
    double cavity_max = 0.0;
    for (int dof = 0; dof < s.layout.n(); ++dof)
      if (s.layout.nodes[static_cast<std::size_t>(dof)].j < 0)
        cavity_max = std::max(cavity_max, std::abs(s.field[dof]));
    CHECK(cavity_max < 1e-12);
  }
}

TEST_CASE("single-lead scattering conserves flux to roundoff")
{
  BilliardGeometry g;
  g.slide_w = 0.2;
  DiscretizationParams d;
  d.h = 0.1;
  for (double E : {11.0, 17.3, 23.7, 29.4, 36.8})
  {
    const ScatteringSolution s = scattering_solve(g, d, E);
    CHECK(std::abs(std::abs(s.R_amp) - 1.0) < 1e-8);
  }
}

TEST_CASE("two-lead S matrix is unitary and reciprocal")
{
  BilliardGeometry g;
  g.slide_w = 0.2;
  g.lead2_enabled = true;
  DiscretizationParams d;
  d.h = 0.1;
  double max_trans = 0.0;
  for (double E : {11.0, 14.6, 21.9, 27.2, 33.1, 37.5})
  {
    const ScatteringSolution s = scattering_solve(g, d, E);
    REQUIRE(s.S.rows() == 2);
    const Eigen::Matrix2cd U = s.S.adjoint() * s.S - Eigen::Matrix2cd::Identity();
    CHECK(U.cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(s.S(0, 1) - s.S(1, 0)) < 1e-10);
    const double G = conductance(g, d, E);
    CHECK(G == doctest::Approx(std::norm(s.S(0, 1))).epsilon(1e-12));
    CHECK(G >= 0.0);
    CHECK(G <= 1.0 + 1e-10);
    max_trans = std::max(max_trans, G);
  }
  // a 0.6-wide opening does transmit somewhere in the band
  CHECK(max_trans > 0.01);
}

TEST_CASE("sealed slide transmits nothing between the leads")
{
  BilliardGeometry g = sealed_box();
  g.lead2_enabled = true;
  DiscretizationParams d;
  d.h = 0.1;
  for (double E : {12.5, 25.0, 33.5})
    CHECK(conductance(g, d, E) < 1e-12);
}

TEST_CASE("scattering validates the one-mode energy window")
{
  const BilliardGeometry g = sealed_box();
  DiscretizationParams d;
  d.h = 0.1;
  const double top = discrete_threshold(2, 0.1);
  CHECK_THROWS_AS(scattering_solve(g, d, 5.0), ValidationError);
  CHECK_THROWS_AS(scattering_solve(g, d, kThreshold1), ValidationError);
  CHECK_THROWS_AS(scattering_solve(g, d, top), ValidationError);
  CHECK_THROWS_AS(scattering_solve(g, d, 41.0), ValidationError);
  BilliardGeometry open_one = sealed_box();
  open_one.slide_w = 0.2;
  CHECK_THROWS_AS(conductance(open_one, d, 20.0), ValidationError);
  CHECK_THROWS_AS(time_delay(g, d, kThreshold1 + 1e-5), ValidationError);
  CHECK_THROWS_AS(time_delay(g, d, top - 1e-5), ValidationError);
}

TEST_CASE("energy on a sealed-cavity eigenvalue raises SingularSystemError")
{
  const BilliardGeometry g = sealed_box();
  DiscretizationParams d;
  d.h = 0.1;
  const double e_sing = fd_box_eig(1, 3, 0.1, 0.1); // about 10.884, in window
  CHECK_THROWS_AS(scattering_solve(g, d, e_sing), SingularSystemError);
  // a nearby off-eigenvalue energy is fine
  CHECK_NOTHROW(scattering_solve(g, d, e_sing + 0.05));
}

TEST_CASE("repeated solves are bitwise identical")
{
  BilliardGeometry g;
  g.slide_w = 0.2;
  DiscretizationParams d;
  d.h = 0.1;
  const ScatteringSolution a = scattering_solve(g, d, 23.7);
  const ScatteringSolution b = scattering_solve(g, d, 23.7);
  CHECK(a.R_amp.real() == b.R_amp.real());
  CHECK(a.R_amp.imag() == b.R_amp.imag());
  CHECK((a.field - b.field).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("time delay at an isolated resonance matches its pole width")
{
  // The reflection phase sweeps 2 pi across a resonance, so the Wigner delay
  // peaks at 4 / Gamma. Cross-check the real-energy scattering solver
  // against the complex-scaled pole search on the same geometry.
  BilliardGeometry g;
  g.slide_w = 0.3;
  DiscretizationParams d;
  d.h = 0.1;
  const PoleResult poles = find_poles(g, d, 15.0, 30.0);
  REQUIRE(poles.set.size() >= 2);

  // pick a well-isolated pole whose width suits the fixed phase-difference
  // step (wide enough that 2 dE < Gamma / 2, narrow enough to dominate the
  // smooth background)
  int best = -1;
  double best_ratio = 0.0;
  for (std::size_t i = 0; i < poles.set.size(); ++i)
  {
    const double gamma = poles.set[i].energy.width();
    if (gamma < 0.05 || gamma > 1.0)
      continue;
    double dist = 1e300;
    for (std::size_t j = 0; j < poles.set.size(); ++j)
      if (j != i)
        dist = std::min(dist, std::abs(poles.set[j].energy.re - poles.set[i].energy.re));
    if (dist / gamma > best_ratio)
    {
      best_ratio = dist / gamma;
      best = static_cast<int>(i);
    }
  }
  REQUIRE(best >= 0);
  REQUIRE(best_ratio > 3.0);
  const double e0 = poles.set[static_cast<std::size_t>(best)].energy.re;
  const double gamma = poles.set[static_cast<std::size_t>(best)].energy.width();
  const double tau = time_delay(g, d, e0);
  CHECK(tau > 0.0);
  CHECK(tau * gamma / 4.0 == doctest::Approx(1.0).epsilon(0.4));
  // far off resonance the delay is much smaller
  const double tau_off = time_delay(g, d, e0 + 5.0 * gamma);
  CHECK(std::abs(tau_off) < 0.5 * tau);
}
