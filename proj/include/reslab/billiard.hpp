// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "reslab/assembly.hpp"
#include "reslab/types.hpp"

namespace reslab
{

// One-mode scattering window of the unit-width leads: thresholds at (c*pi)^2.
inline constexpr double kThreshold1 = 9.869604401089358;  // pi^2
inline constexpr double kThreshold2 = 39.47841760435743;  // (2*pi)^2

struct ClosedSpectrum
{
  std::vector<double> energies;  // ascending, within the requested window
  Eigen::MatrixXd modes;         // L2-normalized eigenfunctions, one column per state
  DomainLayout layout;           // sealed-cavity layout the modes live on
  int factorizations = 0;
  std::vector<std::string> warnings;
};

// All Dirichlet eigenvalues of the sealed cavity inside [e_lo, e_hi] on the
// snapped grid, with real eigenfunctions normalized to sum(phi^2) hx hy = 1.
// Throws GridTooCoarseError if the grid has fewer than 8 points per
// wavelength at e_hi.
ClosedSpectrum closed_spectrum(const BilliardGeometry& g, const DiscretizationParams& d,
                               double e_lo, double e_hi);

struct PoleResult
{
  ResonanceSet set;                // accepted S-matrix poles
  std::vector<double> theta_shift; // per pole: |E(theta) - E(theta + 0.1)|
  DomainLayout layout;             // complex-scaled layout the vectors live on
  int factorizations = 0;
  std::vector<std::string> warnings;
};

// S-matrix poles in the window via exterior complex scaling: eigenvalues of
// the scaled operator are accepted as poles only if they are stable under
// theta -> theta + 0.1 within max(1e-3, 1e-3 |E|) and their imaginary part is
// <= +1e-10 (lower half-plane). Rotated-continuum eigenvalues fail the
// stability test and are dropped. Eigenvectors are c-normalized over the full
// scaled domain. Window must lie within the one-mode interval
// (pi^2, (2 pi)^2).
PoleResult find_poles(const BilliardGeometry& g, const DiscretizationParams& d,
                      double e_lo, double e_hi);

// Heuristic size of the finite-difference eigenvalue error at energy E:
// the leading truncation term of the 5-point scheme, E^2 h^2 / 6.
double fd_error_scale(double E, double h);

// Resonance-state mixing against the sealed-cavity basis: expands the
// cavity-interior part of each pole's eigenvector over closed-spectrum modes.
// Returns coefficients b (rows: poles, cols: closed states); layouts must
// come from the same geometry and grid spacing.
Eigen::MatrixXcd mixing_against_closed(const PoleResult& poles, const ClosedSpectrum& closed);

} // namespace reslab
