// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "reslab/types.hpp"

namespace reslab
{

using SpMatC = Eigen::SparseMatrix<Complex>;

// Controls for the windowed eigensolver. The defaults suit the billiard
// operators; callers must set spacing (the shift-ladder pitch, of the order
// of the local mean level spacing).
struct WindowEigOptions
{
  double spacing = 1.0;        // distance between consecutive shifts on the real axis
  double shift_imag = -1.2;    // imaginary offset of every shift (keeps LU nonsingular)
  double trust_radius = 0.0;   // acceptance radius around each shift; 0 = auto
  int krylov = 56;             // Arnoldi subspace dimension per shift
  double residual_tol = 1e-9;  // accept ||L v - lambda v||_inf <= tol * ||L||_inf
  int dense_threshold = 900;   // below this size just use the dense solver
  double window_margin = 0.0;  // widen the real window for candidate retention
  int refine_iters = 2;        // Rayleigh-quotient polish steps per accepted pair
};

struct WindowEig
{
  std::vector<Complex> values;
  Eigen::MatrixXcd vectors;       // one column per value, unit Hermitian norm
  std::vector<double> residuals;  // direct residuals, relative to ||L||_inf
  int factorizations = 0;         // deterministic effort counter
  std::vector<std::string> warnings;
};

// Eigenvalues of the complex-symmetric sparse operator L whose real part
// lies in [re_lo, re_hi], by shift-invert Arnoldi over a ladder of complex
// shifts (or a dense solve for small operators). The search region extends
// about one trust radius around the shift line at imag = shift_imag;
// eigenvalues much deeper in the lower half-plane (rotated continuum far
// from the axis) are outside the region and may be skipped. Every returned
// pair has a directly verified residual; repeated finds of one state are
// merged, while degenerate partners are kept apart by a rank-revealing
// cluster merge. Deterministic: fixed start vectors, fixed shift ladder,
// fixed merge order.
WindowEig eigs_in_window(const SpMatC& L, double re_lo, double re_hi,
                         const WindowEigOptions& opt);

} // namespace reslab
