// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "reslab/types.hpp"

namespace reslab
{

// Full eigendecomposition of a complex-symmetric matrix (H == H^T, no
// conjugation). States come back sorted by (re asc, im desc) and c-normalized
// v^T v = 1 with the sign chosen so the largest-modulus component points into
// the right half plane (exactly real-positive for real matrices). For a
// complex-symmetric H the left eigenvectors are the transposes of the right
// ones, so no separate left solve is needed. States whose bilinear norm
// |v^T v| collapses below 1e-12 (exceptional-point vicinity / defective pair)
// are flagged degenerate and kept with unit Hermitian norm instead.
//
// Throws NonSymmetricError if max|H - H^T| > 1e-12 * max|H|.
ResonanceSet eig_complex_symmetric(const Eigen::MatrixXcd& H);

// Expansion coefficients b_j = (basis column j)^dagger * v of one resonance
// state over an orthonormal reference basis (Hermitian inner product: the
// basis is conjugated, the state is not). Throws DimensionMismatchError if
// the basis row count differs from the vector length.
Eigen::VectorXcd mixing_coefficients(const ResonanceState& state,
                                     const Eigen::MatrixXcd& basis);

// (1/N) sum over non-degenerate states of <v|v> for c-normalized states.
// Equals 1 exactly when all vectors are real; grows without bound toward an
// exceptional point. NaN if the set has no usable state.
double biorthogonality_measure(const ResonanceSet& set);

// In-place c-normalization of a single vector (expected unit Hermitian norm
// on entry): divides by the principal root of v^T v and applies the sign
// convention, or flags the vector degenerate if |v^T v| < 1e-12. Returns
// (norm_sq, degenerate).
std::pair<double, bool> c_normalize(Eigen::VectorXcd& v);

} // namespace reslab
