// SPDX-License-Identifier: Apache-2.0
#include "reslab/two_level.hpp"

#include <algorithm>
#include <cmath>

#include "reslab/eig.hpp"

namespace reslab
{

namespace
{

void check_params(const TwoLevelParams& p)
{
  if (!(std::isfinite(p.E1) && std::isfinite(p.E2) && std::isfinite(p.Gamma1) &&
        std::isfinite(p.Gamma2) && std::isfinite(p.v_in) && std::isfinite(p.w_ex)))
    throw ValidationError("two_level", "all parameters must be finite");
  if (p.Gamma1 < 0.0)
    throw ValidationError("Gamma1", "width must be >= 0");
  if (p.Gamma2 < 0.0)
    throw ValidationError("Gamma2", "width must be >= 0");
}

std::pair<ComplexEnergy, ComplexEnergy> split_pair(Complex mean, Complex half_root)
{
  return {ComplexEnergy(mean + half_root), ComplexEnergy(mean - half_root)};
}

} // namespace

const char* to_string(CrossingReport::Kind k)
{
  switch (k)
  {
    case CrossingReport::Kind::ComplexAvoided:
      return "complex-avoided";
    case CrossingReport::Kind::RealAxisCrossingAllowed:
      return "real-axis-crossing-allowed";
    case CrossingReport::Kind::ImagAxisCrossingAllowed:
      return "imag-axis-crossing-allowed";
    case CrossingReport::Kind::BranchPoint:
      return "branch-point";
  }
  return "unknown";
}

Eigen::Matrix2cd build_two_level(const TwoLevelParams& p)
{
  check_params(p);
  const Complex coupling(p.v_in, p.w_ex);
  Eigen::Matrix2cd H;
  H << p.eps1(), coupling, coupling, p.eps2();
  return H;
}

std::pair<ComplexEnergy, ComplexEnergy> eigenvalues_v(const TwoLevelParams& p)
{
  check_params(p);
  if (p.w_ex != 0.0)
    throw ValidationError("w_ex", "eigenvalues_v requires w_ex = 0");
  if (p.v_in == 0.0)
    return {ComplexEnergy(p.eps1()), ComplexEnergy(p.eps2())}; // decoupled, keep order
  const Complex d = p.eps1() - p.eps2();
  const Complex mean = 0.5 * (p.eps1() + p.eps2());
  const Complex half_root = 0.5 * std::sqrt(d * d + 4.0 * p.v_in * p.v_in);
  return split_pair(mean, half_root);
}

std::pair<ComplexEnergy, ComplexEnergy> eigenvalues_w(const TwoLevelParams& p)
{
  check_params(p);
  if (p.v_in != 0.0)
    throw ValidationError("v_in", "eigenvalues_w requires v_in = 0");
  if (p.w_ex == 0.0)
    return {ComplexEnergy(p.eps1()), ComplexEnergy(p.eps2())}; // decoupled, keep order
  const Complex d = p.eps1() - p.eps2();
  const Complex mean = 0.5 * (p.eps1() + p.eps2());
  const Complex half_root = 0.5 * std::sqrt(d * d - 4.0 * p.w_ex * p.w_ex);
  return split_pair(mean, half_root);
}

CrossingReport crossing_conditions(const TwoLevelParams& p)
{
  check_params(p);
  const double dE = p.E1 - p.E2;
  const double dG = p.Gamma1 - p.Gamma2;
  CrossingReport report;
  report.R_value = dE * dE - 0.25 * dG * dG + 4.0 * (p.v_in * p.v_in - p.w_ex * p.w_ex);
  report.I_value = dE * dG + 8.0 * p.v_in * p.w_ex;

  // Normalize the tolerance by the magnitude of the terms entering R and I so
  // the 1e-10 threshold is meaningful for any parameter scale.
  const double scale =
      std::max({1.0, dE * dE, 0.25 * dG * dG, 4.0 * p.v_in * p.v_in,
                4.0 * p.w_ex * p.w_ex, std::abs(dE * dG), std::abs(8.0 * p.v_in * p.w_ex)});
  const double tol = 1e-10 * scale;

  const bool r_zero = std::abs(report.R_value) <= tol;
  const bool i_zero = std::abs(report.I_value) <= tol;
  if (r_zero && i_zero)
    report.classification = CrossingReport::Kind::BranchPoint;
  else if (i_zero && report.R_value < 0.0)
    report.classification = CrossingReport::Kind::RealAxisCrossingAllowed;
  else if (i_zero && report.R_value > 0.0)
    report.classification = CrossingReport::Kind::ImagAxisCrossingAllowed;
  else
    report.classification = CrossingReport::Kind::ComplexAvoided;
  return report;
}

std::vector<double> find_critical_coupling(const TwoLevelParams& p, FreeCoupling free)
{
  check_params(p);
  const double dE = p.E1 - p.E2;
  const double dG = p.Gamma1 - p.Gamma2;
  const double A = dE * dE - 0.25 * dG * dG; // R = A + 4(v^2 - w^2)
  const double B = dE * dG;                  // I = B + 8 v w
  const double scale = std::max({1.0, std::abs(A), std::abs(B)});

  std::vector<double> candidates;
  if (free == FreeCoupling::w_ex)
  {
    const double v = p.v_in;
    if (v == 0.0)
    {
      // I reduces to B, independent of w: solvable only if B vanishes, then
      // R = 0 gives w^2 = (A + 4v^2)/4.
      if (std::abs(B) <= 1e-12 * scale)
      {
        const double w2 = 0.25 * A;
        if (w2 > 0.0)
        {
          candidates.push_back(-std::sqrt(w2));
          candidates.push_back(std::sqrt(w2));
        }
        else if (w2 == 0.0)
        {
          candidates.push_back(0.0);
        }
      }
    }
    else
    {
      // I = 0 pins w uniquely; accept it only if R also vanishes there.
      const double w0 = -B / (8.0 * v);
      const double R0 = A + 4.0 * (v * v - w0 * w0);
      if (std::abs(R0) <= 1e-9 * std::max({scale, 4.0 * v * v, 4.0 * w0 * w0}))
        candidates.push_back(w0);
    }
  }
  else
  {
    const double w = p.w_ex;
    if (w == 0.0)
    {
      if (std::abs(B) <= 1e-12 * scale)
      {
        const double v2 = -0.25 * A;
        if (v2 > 0.0)
        {
          candidates.push_back(-std::sqrt(v2));
          candidates.push_back(std::sqrt(v2));
        }
        else if (v2 == 0.0)
        {
          candidates.push_back(0.0);
        }
      }
    }
    else
    {
      const double v0 = -B / (8.0 * w);
      const double R0 = A + 4.0 * (v0 * v0 - w * w);
      if (std::abs(R0) <= 1e-9 * std::max({scale, 4.0 * v0 * v0, 4.0 * w * w}))
        candidates.push_back(v0);
    }
  }

  // Keep only roots that actually produce coincident eigenvalues.
  std::vector<double> roots;
  for (double c : candidates)
  {
    TwoLevelParams q = p;
    (free == FreeCoupling::w_ex ? q.w_ex : q.v_in) = c;
    const Eigen::Matrix2cd H = build_two_level(q);
    const ResonanceSet set = eig_complex_symmetric(H);
    const double gap = std::abs(set[0].energy.value() - set[1].energy.value());
    const double hscale = std::max(1.0, H.cwiseAbs().maxCoeff());
    if (gap < 1e-8 * hscale)
      roots.push_back(c);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

} // namespace reslab
