// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "reslab/geometry.hpp"
#include "reslab/spectral.hpp"
#include "reslab/types.hpp"

namespace reslab
{

// How the waveguides are handled by the assembled operator.
enum class LeadTreatment
{
  None, // sealed cavity only (closed spectrum); no lead unknowns
  Ecs,  // complex-scaled leads of finite length, Dirichlet cap (pole search)
  Dtn,  // leads truncated at the matching plane; transparent boundary added
        // separately by the scattering solver
};

// Enumeration of the grid unknowns for one geometry/treatment. Unknowns are
// ordered row-major in y (bottom lead, cavity, top lead), which keeps the
// bandwidth small and the ordering deterministic.
struct DomainLayout
{
  BilliardGeometry geom;
  Grid grid;
  LeadTreatment treatment = LeadTreatment::None;
  int j_lo = 0, j_hi = 0;
  std::vector<int> table; // (j - j_lo) * (nx + 1) + i -> dof index or -1
  std::vector<NodeRef> nodes;

  int n() const { return static_cast<int>(nodes.size()); }
  int dof_at(int i, int j) const
  {
    if (i < 0 || i > grid.nx || j < j_lo || j > j_hi)
      return -1;
    return table[static_cast<std::size_t>(j - j_lo) * (grid.nx + 1) + i];
  }
  double x_of(int dof) const { return grid.x_of(nodes[static_cast<std::size_t>(dof)].i); }
  double y_of(int dof) const { return grid.y_of(nodes[static_cast<std::size_t>(dof)].j); }

  // Dofs of one lead row, ordered by column. lead is 1 or 2; local_row >= 0
  // counts away from the mouth (0 = the aperture row itself).
  std::vector<int> lead_row_dofs(int lead, int local_row) const;
};

DomainLayout build_layout(const BilliardGeometry& g, const DiscretizationParams& d,
                          LeadTreatment treatment);

// Assembles the (negative) Laplacian on the layout as a complex-symmetric
// sparse matrix. theta > 0 applies exterior complex scaling in the lead
// regions beyond the onset row: the discrete operator is symmetrized with the
// complex row masses so that the bilinear product of its eigenvectors is the
// physically weighted one. With theta = 0 this reduces to the standard
// 5-point scheme.
SpMatC build_operator(const DomainLayout& layout, double theta);

} // namespace reslab
