// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reslab/types.hpp"

namespace reslab
{

// Minimum-cost assignment (Hungarian method, shortest-augmenting-path form).
// cost is n_rows x n_cols with n_rows <= n_cols; returns for each row the
// assigned column. Deterministic: ties are broken by scan order.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

// Pairing of two pole lists across a parameter step.
struct Assignment
{
  std::vector<std::pair<int, int>> pairs; // (index in prev, index in next)
  std::vector<int> unmatched_prev;        // trajectories that leave
  std::vector<int> unmatched_next;        // trajectories that enter
};

// Match poles of consecutive sweep steps by minimal total |E_i - E_j| in the
// complex plane. Pairs whose distance exceeds gate are split into
// leave + enter instead (gate <= 0 disables gating). Handles unequal list
// lengths; the surplus shows up as unmatched entries.
Assignment match_energies(const std::vector<ComplexEnergy>& prev,
                          const std::vector<ComplexEnergy>& next, double gate = 0.0);

// Convenience overload for equal-size resonance sets: returns perm with
// perm[i] = index in next matched to state i of prev. Throws
// DimensionMismatchError if the sizes differ.
std::vector<int> match_states(const ResonanceSet& prev, const ResonanceSet& next);

} // namespace reslab
