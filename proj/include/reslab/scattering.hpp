// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "reslab/assembly.hpp"
#include "reslab/types.hpp"

namespace reslab
{

// Solution of one fixed-energy scattering problem. Amplitudes are referenced
// to the lead mouth (the aperture plane): S(0,0) is the lead-1 reflection,
// S(1,0) the transmission into lead 2 for lead-1 incidence, and so on. The
// field is the total wave (incident plus scattered) for unit lead-1
// incidence, on the DtN-truncated layout.
struct ScatteringSolution
{
  double E = 0.0;
  double k = 0.0; // continuum wavenumber sqrt(E - pi^2) of the open mode
  Complex R_amp{0.0, 0.0};
  Eigen::MatrixXcd S; // 1x1 (single lead) or 2x2
  Eigen::VectorXcd field;
  DomainLayout layout;
  int factorizations = 0;
};

// Lattice dispersion of transverse lead mode c: the discrete threshold
// (4/hx^2) sin^2(c pi hx / 2), slightly below the continuum (c pi)^2.
double discrete_threshold(int c, double hx);

// Solves the Helmholtz problem at real energy E with a unit-flux mode-1 wave
// incident from each lead in turn. The leads are truncated at the matching
// plane (ecs_start deep) by an exact lattice Dirichlet-to-Neumann map over
// n_modes transverse modes, so single-channel flux conservation holds to
// roundoff. E must lie in the one-mode window: above pi^2 and below the
// discrete second threshold of the grid (which approaches (2 pi)^2 as h -> 0).
// Throws SingularSystemError if E hits an eigenvalue of the truncated closed
// problem (retried once with a deeper matching plane first).
ScatteringSolution scattering_solve(const BilliardGeometry& g,
                                    const DiscretizationParams& d, double E);

// Two-lead conductance G(E) = |S_12|^2.
double conductance(const BilliardGeometry& g, const DiscretizationParams& d, double E);

// Wigner time delay tau = d(arg R)/dE of the lead-1 reflection phase, by the
// centered difference with step 1e-4 * E (phase-unwrapped across the cut).
// Requires E at least 3 steps away from both window edges.
double time_delay(const BilliardGeometry& g, const DiscretizationParams& d, double E);

} // namespace reslab
