// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reslab/types.hpp"

namespace reslab
{

// Two resonance states epsilon_k = E_k - (i/2)Gamma_k coupled by a complex
// interaction v_in + i*w_ex: v_in acts like a Hermitian (internal) coupling,
// w_ex like an anti-Hermitian (via-the-continuum) one.
struct TwoLevelParams
{
  double E1 = 0.0;
  double E2 = 0.0;
  double Gamma1 = 0.0;
  double Gamma2 = 0.0;
  double v_in = 0.0;
  double w_ex = 0.0;

  Complex eps1() const { return {E1, -0.5 * Gamma1}; }
  Complex eps2() const { return {E2, -0.5 * Gamma2}; }
};

// Outcome of the crossing-condition algebra for a two-level system. The pair
// of real conditions R = I = 0 marks a branch point of the S-matrix
// (exceptional point); the signs of R at I = 0 separate crossings that are
// allowed in energy from crossings allowed in width.
struct CrossingReport
{
  enum class Kind
  {
    ComplexAvoided,
    RealAxisCrossingAllowed,
    ImagAxisCrossingAllowed,
    BranchPoint,
  };

  double R_value = 0.0;
  double I_value = 0.0;
  Kind classification = Kind::ComplexAvoided;
};

const char* to_string(CrossingReport::Kind k);

// H = [[eps1, v + iw], [v + iw, eps2]]; complex symmetric by construction.
// Throws ValidationError on negative widths or non-finite entries.
Eigen::Matrix2cd build_two_level(const TwoLevelParams& p);

// Closed form for w_ex = 0 (internal coupling only):
//   E_pm = (eps1+eps2)/2 +- (1/2) sqrt((eps1-eps2)^2 + 4 v^2)
// principal square root; returned as (plus branch, minus branch).
std::pair<ComplexEnergy, ComplexEnergy> eigenvalues_v(const TwoLevelParams& p);

// Closed form for v_in = 0 (external coupling only):
//   E_pm = (eps1+eps2)/2 +- (1/2) sqrt((eps1-eps2)^2 - 4 w^2)
std::pair<ComplexEnergy, ComplexEnergy> eigenvalues_w(const TwoLevelParams& p);

// Evaluates R = (E1-E2)^2 - (1/4)(Gamma1-Gamma2)^2 + 4(v^2 - w^2) and
// I = (E1-E2)(Gamma1-Gamma2) + 8 v w, and classifies: both ~0 -> branch
// point; I ~ 0 with R < 0 -> crossing allowed on the real (energy) axis;
// I ~ 0 with R > 0 -> crossing allowed on the imaginary (width) axis;
// otherwise the two eigenvalues avoid each other in the complex plane.
CrossingReport crossing_conditions(const TwoLevelParams& p);

enum class FreeCoupling
{
  v_in,
  w_ex,
};

// All real values of the chosen free coupling for which R = I = 0
// simultaneously (branch points), the other coupling held at its value in p.
// The system is quadratic, so this is closed-form; each root is verified to
// produce coincident eigenvalues before being returned. Empty result means
// the two conditions are inconsistent for every value of the free coupling.
std::vector<double> find_critical_coupling(const TwoLevelParams& p, FreeCoupling free);

} // namespace reslab
