// SPDX-License-Identifier: Apache-2.0
#include "reslab/fits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace reslab
{

namespace
{

// Residual vector and Jacobian of the model at parameters p = (center,
// width, amplitude, offset). Residuals are value - model.
double residuals(const std::vector<double>& E, const std::vector<double>& y,
                 const Eigen::Vector4d& p, Eigen::VectorXd& r, Eigen::MatrixXd* J)
{
  const double e0 = p[0], gamma = p[1], A = p[2], c = p[3];
  const double q = 0.25 * gamma * gamma; // (width/2)^2
  const int n = static_cast<int>(E.size());
  double rss = 0.0;
  for (int i = 0; i < n; ++i)
  {
    const double d = E[static_cast<std::size_t>(i)] - e0;
    const double den = d * d + q;
    const double shape = q / den;
    r[i] = y[static_cast<std::size_t>(i)] - (A * shape + c);
    rss += r[i] * r[i];
    if (J)
    {
      (*J)(i, 0) = A * q * 2.0 * d / (den * den);     // d model / d center
      (*J)(i, 1) = A * d * d / (den * den) * 0.5 * gamma; // d model / d width
      (*J)(i, 2) = shape;
      (*J)(i, 3) = 1.0;
    }
  }
  return rss;
}

} // namespace

BreitWignerFit fit_breit_wigner(const std::vector<double>& energy,
                                const std::vector<double>& value)
{
  if (energy.size() != value.size())
    throw DimensionMismatchError("fit_breit_wigner: energy and value lengths differ");
  const int n = static_cast<int>(energy.size());
  if (n < 5)
    throw ValidationError("value", "Breit-Wigner fit needs at least 5 samples");

  // Orient the line: a peak if the maximum sticks out further from the
  // median level than the minimum does, otherwise a dip.
  std::vector<double> sorted = value;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double level = sorted[static_cast<std::size_t>(n / 2)];
  int i_max = 0, i_min = 0;
  for (int i = 1; i < n; ++i)
  {
    if (value[static_cast<std::size_t>(i)] > value[static_cast<std::size_t>(i_max)]) i_max = i;
    if (value[static_cast<std::size_t>(i)] < value[static_cast<std::size_t>(i_min)]) i_min = i;
  }
  const bool peak = value[static_cast<std::size_t>(i_max)] - level >=
                    level - value[static_cast<std::size_t>(i_min)];
  const int i_ext = peak ? i_max : i_min;

  const double span = std::abs(energy.back() - energy.front());
  Eigen::Vector4d p;
  p[0] = energy[static_cast<std::size_t>(i_ext)];
  p[3] = peak ? value[static_cast<std::size_t>(i_min)] : value[static_cast<std::size_t>(i_max)];
  p[2] = value[static_cast<std::size_t>(i_ext)] - p[3];
  // half-height span around the extremum
  const double half = p[3] + 0.5 * p[2];
  int lo = i_ext, hi = i_ext;
  auto beyond_half = [&](int i) {
    const double v = value[static_cast<std::size_t>(i)];
    return peak ? v >= half : v <= half;
  };
  while (lo > 0 && beyond_half(lo - 1))
    --lo;
  while (hi < n - 1 && beyond_half(hi + 1))
    ++hi;
  p[1] = std::abs(energy[static_cast<std::size_t>(hi)] - energy[static_cast<std::size_t>(lo)]);
  if (p[1] <= 0.0)
    p[1] = span > 0.0 ? span / static_cast<double>(n) : 1.0;

  // Iterate in nondimensional units. The center lives on the absolute energy
  // axis while the width of a narrow line can be orders of magnitude smaller,
  // so in raw units J^T J is numerically singular (condition ~ (E/width)^4)
  // and the damped steps stall. Shift/scale the energies to O(1), the values
  // to unit amplitude, and transform back on exit.
  const double e_mid = 0.5 * (energy.front() + energy.back());
  const double e_half = span > 0.0 ? 0.5 * span : 1.0;
  double y_abs = 0.0;
  for (double v : value) y_abs = std::max(y_abs, std::abs(v));
  const double y_norm = std::abs(p[2]) > 0.0 ? std::abs(p[2]) : std::max(y_abs, 1.0);
  std::vector<double> es(energy.size()), ys(value.size());
  for (std::size_t i = 0; i < energy.size(); ++i)
  {
    es[i] = (energy[i] - e_mid) / e_half;
    ys[i] = value[i] / y_norm;
  }
  p[0] = (p[0] - e_mid) / e_half;
  p[1] /= e_half;
  p[2] /= y_norm;
  p[3] /= y_norm;

  Eigen::VectorXd r(n);
  Eigen::MatrixXd J(n, 4);
  double rss = residuals(es, ys, p, r, &J);
  const double y_scale = std::max(std::abs(p[2]), 1e-300);

  BreitWignerFit out;
  double lambda = 1e-6;
  int it = 0;
  for (; it < 200; ++it)
  {
    const Eigen::Vector4d g = J.transpose() * r;
    if (g.norm() <= 1e-12 * static_cast<double>(n) * y_scale * std::max(1.0, y_scale))
      break;

    const Eigen::Matrix4d JtJ = J.transpose() * J;
    // Levenberg damping with an absolute floor so a momentarily flat
    // direction (e.g. amplitude near zero) cannot make the system singular.
    const double floor_d = 1e-14 * (JtJ.trace() + 1.0);
    bool stepped = false;
    for (int tries = 0; tries < 12 && !stepped; ++tries)
    {
      Eigen::Matrix4d M = JtJ;
      for (int k = 0; k < 4; ++k)
        M(k, k) += lambda * JtJ(k, k) + floor_d;
      const Eigen::Vector4d step = M.ldlt().solve(g);
      Eigen::Vector4d p_new = p + step;
      p_new[1] = std::abs(p_new[1]); // width sign is a gauge choice
      if (p_new[1] == 0.0 || !p_new.allFinite())
      {
        lambda *= 10.0;
        continue;
      }
      const double rss_new = residuals(es, ys, p_new, r, nullptr);
      if (rss_new <= rss * (1.0 + 1e-14))
      {
        const bool converged = rss - rss_new <= 1e-14 * (rss + 1e-300) ||
                               step.norm() <= 1e-13 * (1.0 + p.norm());
        p = p_new;
        rss = residuals(es, ys, p, r, &J);
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (converged)
        {
          it += 1;
          goto done;
        }
      }
      else
      {
        lambda *= 10.0;
      }
    }
    if (!stepped)
      break; // no downhill step found at any damping: treat as stalled
  }
done:
  // Accept only solutions whose gradient is genuinely negligible; otherwise
  // the iteration stalled away from a minimum.
  rss = residuals(es, ys, p, r, &J);
  const Eigen::Vector4d g = J.transpose() * r;
  if (!(g.norm() <= 1e-6 * static_cast<double>(n) * std::max(1.0, y_scale * y_scale)))
    throw ConvergenceError("Breit-Wigner fit did not converge");
  out.center = e_mid + e_half * p[0];
  out.width = std::abs(e_half * p[1]);
  out.amplitude = y_norm * p[2];
  out.offset = y_norm * p[3];
  out.rss = y_norm * y_norm * rss;
  out.iterations = it;
  return out;
}

} // namespace reslab
