// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "reslab/types.hpp"

namespace reslab
{

// N-level statistical-theory form of the effective Hamiltonian: a real
// symmetric internal part plus an anti-Hermitian part built from real
// channel coupling vectors (columns of V, one per open channel).
struct StatisticalParams
{
  Eigen::MatrixXd H0;  // closed-system part, real symmetric N x N
  Eigen::MatrixXd ReW; // real (principal-value) continuum correction, symmetric
  Eigen::MatrixXd V;   // coupling vectors, N x Lambda (Lambda >= 1 channels)
};

// H = H0 + ReW - i V V^T. Complex symmetric; the anti-Hermitian part is
// negative semidefinite, so all widths come out >= 0. Throws
// NonSymmetricError if H0 or ReW is not symmetric, DimensionMismatchError on
// inconsistent shapes, ValidationError if V has no columns.
Eigen::MatrixXcd build_statistical(const StatisticalParams& p);

// Channel couplings dressed by the resonance eigenfunctions:
// gamma_{Rc} = sum_k V_{kc} * phi_{R,k} (bilinear, c-normalized phi). Rows
// index resonances in set order, columns index channels.
Eigen::MatrixXcd dressed_couplings(const ResonanceSet& set, const Eigen::MatrixXd& V);

// Resonance part of the S-matrix at real energy E:
//   S_{cc'} = i sum_R gamma_{Rc'} gamma_{Rc} / (E - E_R + (i/2) Gamma_R)
// with the denominators E - poles[R]. Symmetric Lambda x Lambda. Throws
// PoleOnAxisError if E sits within 1e-12 of a pole whose width is below
// 1e-12 (the sum would be evaluated on top of a real-axis pole).
Eigen::MatrixXcd resonance_s_matrix(const std::vector<ComplexEnergy>& poles,
                                    const Eigen::MatrixXcd& couplings, double E);

} // namespace reslab
