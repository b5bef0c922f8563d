// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "reslab/types.hpp"

namespace reslab
{

// Least-squares fit of a single Breit-Wigner line on a constant background,
//   f(E) = amplitude * (width/2)^2 / ((E - center)^2 + (width/2)^2) + offset.
// amplitude < 0 describes a dip. width is always positive.
struct BreitWignerFit
{
  double center = 0.0;
  double width = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double rss = 0.0; // residual sum of squares at the solution
  int iterations = 0;
};

// Damped Gauss-Newton fit with analytic derivatives, initialized from the
// extremum and its half-height span. energy and value must have equal length
// >= 5. Throws DimensionMismatchError on size mismatch, ValidationError on
// too few points, ConvergenceError if the iteration stalls before the
// gradient is negligible.
BreitWignerFit fit_breit_wigner(const std::vector<double>& energy,
                                const std::vector<double>& value);

} // namespace reslab
