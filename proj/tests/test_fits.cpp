// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "reslab/fits.hpp"

using namespace reslab;

namespace
{

double bw(double E, double e0, double gamma, double A, double c)
{
  const double q = 0.25 * gamma * gamma;
  const double d = E - e0;
  return A * q / (d * d + q) + c;
}

struct Trace
{
  std::vector<double> E, y;
};

Trace sample(double lo, double hi, int n, double e0, double gamma, double A, double c)
{
  Trace t;
  for (int i = 0; i < n; ++i)
  {
    const double E = lo + (hi - lo) * i / (n - 1.0);
    t.E.push_back(E);
    t.y.push_back(bw(E, e0, gamma, A, c));
  }
  return t;
}

} // namespace

TEST_CASE("clean Breit-Wigner data is recovered to high accuracy")
{
  const Trace t = sample(17.0, 24.0, 81, 20.3, 0.7, 5.5, 0.8);
  const BreitWignerFit f = fit_breit_wigner(t.E, t.y);
  CHECK(f.center == doctest::Approx(20.3).epsilon(1e-8));
  CHECK(f.width == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(f.amplitude == doctest::Approx(5.5).epsilon(1e-8));
  CHECK(f.offset == doctest::Approx(0.8).epsilon(1e-8));
  CHECK(f.rss < 1e-16);
}

TEST_CASE("a line close to the window edge still converges")
{
  const Trace t = sample(19.9, 25.0, 61, 20.4, 0.5, 3.0, 0.2);
  const BreitWignerFit f = fit_breit_wigner(t.E, t.y);
  CHECK(f.center == doctest::Approx(20.4).epsilon(1e-6));
  CHECK(f.width == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("one percent noise shifts the parameters by about a percent")
{
  Trace t = sample(17.0, 24.0, 81, 20.3, 0.7, 5.5, 0.8);
  std::uint64_t s = 12345;
  for (double& v : t.y)
  {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    const double u = static_cast<double>(s >> 11) * (2.0 / 9007199254740992.0) - 1.0;
    v += 0.055 * u;
  }
  const BreitWignerFit f = fit_breit_wigner(t.E, t.y);
  CHECK(std::abs(f.center - 20.3) < 0.02 * 0.7);
  CHECK(f.width == doctest::Approx(0.7).epsilon(0.05));
  CHECK(f.amplitude == doctest::Approx(5.5).epsilon(0.05));
  CHECK(f.offset == doctest::Approx(0.8).epsilon(0.05));
}

TEST_CASE("dips fit with negative amplitude")
{
  const Trace t = sample(10.0, 14.0, 101, 12.1, 0.35, -0.9, 1.0);
  const BreitWignerFit f = fit_breit_wigner(t.E, t.y);
  CHECK(f.center == doctest::Approx(12.1).epsilon(1e-7));
  CHECK(f.width == doctest::Approx(0.35).epsilon(1e-7));
  CHECK(f.amplitude == doctest::Approx(-0.9).epsilon(1e-7));
  CHECK(f.offset == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("a peak only a few samples wide is still resolved")
{
  // grid step 0.1, width 0.25: the half-height span holds just 2-3 points
  const Trace t = sample(18.0, 22.0, 41, 20.05, 0.25, 4.0, 0.1);
  const BreitWignerFit f = fit_breit_wigner(t.E, t.y);
  CHECK(f.center == doctest::Approx(20.05).epsilon(1e-6));
  CHECK(f.width == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("degenerate fit inputs are rejected")
{
  const Trace t = sample(17.0, 24.0, 81, 20.3, 0.7, 5.5, 0.8);
  std::vector<double> short_y(t.y.begin(), t.y.end() - 1);
  CHECK_THROWS_AS(fit_breit_wigner(t.E, short_y), DimensionMismatchError);
  const std::vector<double> few{1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(fit_breit_wigner(few, few), ValidationError);
}

TEST_CASE("narrow line far from the origin stays well conditioned")
{
  // width five orders below the center: raw-unit normal equations are
  // numerically singular, the scaled iteration must still converge
  const double e0 = 25.4941900, gamma = 2.744703e-4;
  const Trace t = sample(e0 - 3 * gamma, e0 + 3 * gamma, 31, e0, gamma, 14100.0, 440.0);
  const BreitWignerFit f = fit_breit_wigner(t.E, t.y);
  CHECK(f.center == doctest::Approx(e0).epsilon(1e-10));
  CHECK(f.width == doctest::Approx(gamma).epsilon(1e-7));
  CHECK(f.amplitude == doctest::Approx(14100.0).epsilon(1e-6));
}

TEST_CASE("flat data yields a zero-amplitude line")
{
  const std::vector<double> E{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const std::vector<double> y(6, 2.5);
  const BreitWignerFit f = fit_breit_wigner(E, y);
  CHECK(f.amplitude == 0.0);
  CHECK(f.offset == 2.5);
  CHECK(f.rss == 0.0);
}
