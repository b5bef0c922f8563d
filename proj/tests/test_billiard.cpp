// SPDX-License-Identifier: Apache-2.0
#include "reslab/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

using reslab::BilliardGeometry;
using reslab::ClosedSpectrum;
using reslab::DiscretizationParams;
using reslab::Grid;
using reslab::PoleResult;

namespace
{

constexpr double kPi = 3.141592653589793;

BilliardGeometry empty_box()
{
  BilliardGeometry g;
  g.slide_w = 0.5; // sealed
  g.scatterer_enabled = false;
  return g;
}

// Exact eigenvalue of the 5-point scheme for mode (n, m) of the sealed empty
// 3 x 3 cavity on spacings (hx, hy): the discrete sine modes diagonalize the
// lattice Laplacian exactly.
double fd_eigenvalue(int n, int m, double hx, double hy)
{
  const double sx = std::sin(n * kPi * hx / 6.0);
  const double sy = std::sin(m * kPi * hy / 6.0);
  return 4.0 / (hx * hx) * sx * sx + 4.0 / (hy * hy) * sy * sy;
}

std::vector<double> fd_spectrum_in_window(double hx, double hy, double lo, double hi)
{
  std::vector<double> vals;
  for (int n = 1; n < 40; ++n)
    for (int m = 1; m < 40; ++m)
    {
      const double lam = fd_eigenvalue(n, m, hx, hy);
      if (lam > lo && lam < hi)
        vals.push_back(lam);
    }
  std::sort(vals.begin(), vals.end());
  return vals;
}

} // namespace

TEST_CASE("grid snapping aligns every wall and slide edge")
{
  DiscretizationParams d;

  BilliardGeometry g; // slide 0.15: offsets force the 0.05 lattice
  Grid gr = reslab::make_grid(g, d, true);
  CHECK(gr.hx == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(gr.nx == 60);
  CHECK(gr.hy == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(gr.ny_cav == 60);
  CHECK(gr.js == 40);                      // ecs onset at 2.0
  CHECK(gr.j_cap == 160);                  // plus 6.0 of scaled lead
  CHECK(gr.ecs_start_actual == doctest::Approx(2.0));
  CHECK(gr.lead_length_actual == doctest::Approx(6.0));
  // Lead 1 mouth: interior columns strictly inside (-1.5, -0.5).
  CHECK(gr.lead1_i0 == 1);
  CHECK(gr.lead1_i1 == 19);
  // Slide opening (-1.35, -0.65): interior nodes 28 .. 36... checked via x.
  CHECK(gr.x_of(gr.ap1_i0) == doctest::Approx(-1.35 + 0.05));
  CHECK(gr.x_of(gr.ap1_i1) == doctest::Approx(-0.65 - 0.05));

  g.slide_w = 0.125; // gcd of offsets is 0.125 -> hx = 0.125/3
  gr = reslab::make_grid(g, d, true);
  CHECK(gr.hx == doctest::Approx(0.125 / 3.0).epsilon(1e-12));
  CHECK(gr.nx == 72);

  g.slide_w = 0.5; // sealed: empty aperture range
  gr = reslab::make_grid(g, d, false);
  CHECK(gr.ap1_i0 > gr.ap1_i1);
  CHECK(gr.hx == doctest::Approx(0.05));

  BilliardGeometry bad;
  bad.x_r = 1.500033; // not on the 1e-4 lattice
  CHECK_THROWS_AS(reslab::make_grid(bad, d, true), reslab::ValidationError);
}

TEST_CASE("geometry and discretization validation")
{
  DiscretizationParams d;
  BilliardGeometry g;

  g.x_r = 1.4;
  CHECK_THROWS_AS(reslab::validate_geometry(g), reslab::ValidationError);
  g = BilliardGeometry{};
  g.y_d = -2.9;
  CHECK_THROWS_AS(reslab::validate_geometry(g), reslab::ValidationError);
  g = BilliardGeometry{};
  g.slide_w = 0.6;
  CHECK_THROWS_AS(reslab::validate_geometry(g), reslab::ValidationError);
  g = BilliardGeometry{};
  g.scatterer_y = -2.6; // disk reaches below the floor at y = -3
  CHECK_THROWS_AS(reslab::validate_geometry(g), reslab::ValidationError);

  d.h = 0.2;
  CHECK_THROWS_AS(reslab::validate_discretization(d), reslab::ValidationError);
  d = DiscretizationParams{};
  d.lead_length = 1.0;
  CHECK_THROWS_AS(reslab::validate_discretization(d), reslab::ValidationError);
  d = DiscretizationParams{};
  d.n_modes = 2;
  CHECK_THROWS_AS(reslab::validate_discretization(d), reslab::ValidationError);
}

TEST_CASE("sealed empty cavity: ground state matches the exact lattice value")
{
  DiscretizationParams d;
  d.h = 0.1;
  const ClosedSpectrum cs = reslab::closed_spectrum(empty_box(), d, 1.0, 3.0);
  REQUIRE(cs.energies.size() == 1);
  const double exact = fd_eigenvalue(1, 1, 0.1, 0.1);
  CHECK(std::abs(cs.energies[0] - exact) <= 1e-8 * exact);
  // Continuum limit 2 pi^2 / 9 is approached from below.
  CHECK(cs.energies[0] < 2.0 * kPi * kPi / 9.0);

  // Ground mode: positive, symmetric in x, unit L2 norm.
  const auto& L = cs.layout;
  const double cell = L.grid.hx * L.grid.hy;
  double norm = 0.0, minv = 1e300;
  for (int dof = 0; dof < L.n(); ++dof)
  {
    norm += cs.modes(dof, 0) * cs.modes(dof, 0) * cell;
    minv = std::min(minv, cs.modes(dof, 0));
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(minv > -1e-8);
  for (int dof = 0; dof < L.n(); ++dof)
  {
    const auto nd = L.nodes[static_cast<std::size_t>(dof)];
    const int mirror = L.dof_at(L.grid.nx - nd.i, nd.j);
    REQUIRE(mirror >= 0);
    CHECK(std::abs(cs.modes(dof, 0) - cs.modes(mirror, 0)) <= 1e-7);
  }
}

TEST_CASE("finite-difference eigenvalues converge at second order")
{
  const double exact = 2.0 * kPi * kPi / 9.0;
  std::vector<double> errs;
  for (double h : {0.1, 0.05, 0.025})
  {
    DiscretizationParams d;
    d.h = h;
    const ClosedSpectrum cs = reslab::closed_spectrum(empty_box(), d, 1.0, 3.0);
    REQUIRE(cs.energies.size() == 1);
    errs.push_back(std::abs(cs.energies[0] - exact));
  }
  const double p1 = std::log2(errs[0] / errs[1]);
  const double p2 = std::log2(errs[1] / errs[2]);
  CHECK(p1 == doctest::Approx(2.0).epsilon(0.1));
  CHECK(p2 == doctest::Approx(2.0).epsilon(0.1));
  // And the error magnitude is of the predicted scale.
  CHECK(errs[0] < 2.0 * reslab::fd_error_scale(exact, 0.1));
  CHECK(errs[0] > 0.02 * reslab::fd_error_scale(exact, 0.1));
}

TEST_CASE("one-mode window of the empty cavity holds 18 states")
{
  // Continuum enumeration: 9 < n^2 + m^2 < 36.
  int count = 0;
  for (int n = 1; n < 10; ++n)
    for (int m = 1; m < 10; ++m)
    {
      const double e = (n * n + m * m) * kPi * kPi / 9.0;
      if (e > reslab::kThreshold1 && e < reslab::kThreshold2)
        ++count;
    }
  CHECK(count == 18);

  // The h = 0.05 lattice keeps exactly those 18 inside the window (all
  // lattice eigenvalues sit below their continuum limits, and the nearest
  // outside candidates stay outside). Eight exact degenerate pairs included.
  DiscretizationParams d;
  d.h = 0.05;
  const std::vector<double> exact =
      fd_spectrum_in_window(0.05, 0.05, reslab::kThreshold1, reslab::kThreshold2);
  REQUIRE(exact.size() == 18);
  const ClosedSpectrum cs =
      reslab::closed_spectrum(empty_box(), d, reslab::kThreshold1, reslab::kThreshold2);
  REQUIRE(cs.energies.size() == 18);
  for (std::size_t k = 0; k < 18; ++k)
    CHECK(std::abs(cs.energies[k] - exact[k]) <= 1e-6);

  // Degenerate partners came out L2-orthogonal.
  const double cell = cs.layout.grid.hx * cs.layout.grid.hy;
  for (std::size_t k = 0; k + 1 < 18; ++k)
    if (exact[k + 1] - exact[k] < 1e-9)
    {
      const double dot = cs.modes.col(static_cast<Eigen::Index>(k))
                             .dot(cs.modes.col(static_cast<Eigen::Index>(k + 1))) *
                         cell;
      CHECK(std::abs(dot) <= 1e-7);
    }
}

TEST_CASE("scatterer raises every eigenvalue (domain monotonicity)")
{
  DiscretizationParams d;
  d.h = 0.1;
  BilliardGeometry with = empty_box();
  with.scatterer_enabled = true; // default disk at (-0.2, -1.2), r = 0.5
  const ClosedSpectrum a = reslab::closed_spectrum(empty_box(), d, 1.0, 14.0);
  const ClosedSpectrum b = reslab::closed_spectrum(with, d, 1.0, 14.0);
  REQUIRE(a.energies.size() >= 3);
  REQUIRE(b.energies.size() >= 1);
  for (std::size_t k = 0; k < std::min(a.energies.size(), b.energies.size()); ++k)
    CHECK(b.energies[k] > a.energies[k]);
}

TEST_CASE("window and resolution guards")
{
  DiscretizationParams d;
  d.h = 0.1;
  CHECK_THROWS_AS(reslab::closed_spectrum(empty_box(), d, 3.0, 1.0),
                  reslab::ValidationError);
  CHECK_THROWS_AS(reslab::closed_spectrum(empty_box(), d, 1.0, 700.0),
                  reslab::GridTooCoarseError);

  BilliardGeometry g; // open default
  CHECK_THROWS_AS(reslab::find_poles(g, d, 5.0, 20.0), reslab::ValidationError);
  CHECK_THROWS_AS(reslab::find_poles(g, d, 35.0, 45.0), reslab::ValidationError);
  DiscretizationParams steep;
  steep.ecs_theta = 1.49; // theta + 0.1 would pass pi/2
  CHECK_THROWS_AS(reslab::find_poles(g, steep, 12.0, 30.0), reslab::ValidationError);

  CHECK(reslab::fd_error_scale(10.0, 0.1) == doctest::Approx(100.0 * 0.01 / 6.0));
}

TEST_CASE("sealed limit: poles reproduce the closed spectrum with zero width")
{
  BilliardGeometry g; // scatterer on, slide sealed
  g.slide_w = 0.5;
  DiscretizationParams d;
  d.h = 0.05;
  const double lo = 12.0, hi = 30.0;

  const PoleResult pr = reslab::find_poles(g, d, lo, hi);
  const ClosedSpectrum cs = reslab::closed_spectrum(g, d, lo, hi);
  REQUIRE(cs.energies.size() >= 5);
  REQUIRE(pr.set.size() == cs.energies.size());
  for (std::size_t k = 0; k < cs.energies.size(); ++k)
  {
    CHECK(std::abs(pr.set[k].energy.re - cs.energies[k]) <= 1e-8);
    CHECK(std::abs(pr.set[k].energy.width()) <= 1e-8);
    CHECK(pr.theta_shift[k] <= 1e-8);
  }
  CHECK(pr.set.biorthogonality == doctest::Approx(1.0).epsilon(1e-6));

  // Mixing against the closed basis is the identity up to sign convention.
  const Eigen::MatrixXcd b = reslab::mixing_against_closed(pr, cs);
  for (Eigen::Index r = 0; r < b.rows(); ++r)
    for (Eigen::Index m = 0; m < b.cols(); ++m)
    {
      if (r == m)
        CHECK(std::abs(b(r, m) - reslab::Complex(1.0)) <= 2e-3);
      else
        CHECK(std::abs(b(r, m)) <= 2e-3);
    }
}

TEST_CASE("open billiard: poles are theta-stable and carry positive widths")
{
  BilliardGeometry g; // default open geometry, slide 0.15
  DiscretizationParams d;
  d.h = 0.1; // the slide forces hx = 0.05; hy stays 0.1
  const double lo = 15.0, hi = 30.0;

  d.ecs_theta = 0.30;
  const PoleResult a = reslab::find_poles(g, d, lo, hi);
  d.ecs_theta = 0.40;
  const PoleResult b = reslab::find_poles(g, d, lo, hi);

  REQUIRE(a.set.size() >= 3);
  REQUIRE(a.set.size() == b.set.size());
  double max_width = 0.0;
  for (std::size_t k = 0; k < a.set.size(); ++k)
  {
    // Same pole from two different contours.
    CHECK(std::abs(a.set[k].energy.value() - b.set[k].energy.value()) <=
          5e-3 * std::abs(a.set[k].energy.value()));
    CHECK(a.set[k].energy.im <= 1e-10);
    max_width = std::max(max_width, a.set[k].energy.width());
  }
  CHECK(max_width > 1e-3); // the cavity is open: something must decay
  CHECK(a.set.biorthogonality >= 1.0 - 1e-10);
}
