// SPDX-License-Identifier: Apache-2.0
#include "reslab/assembly.hpp"

#include <cmath>

namespace reslab
{

namespace
{

bool inside_scatterer(const BilliardGeometry& g, double x, double y)
{
  if (!g.scatterer_enabled)
    return false;
  const double dx = x - g.scatterer_x;
  const double dy = y - g.scatterer_y;
  return dx * dx + dy * dy < g.scatterer_radius * g.scatterer_radius;
}

} // namespace

std::vector<int> DomainLayout::lead_row_dofs(int lead, int local_row) const
{
  std::vector<int> dofs;
  if (lead == 1)
  {
    const int j = local_row;
    const int i0 = local_row == 0 ? grid.ap1_i0 : grid.lead1_i0;
    const int i1 = local_row == 0 ? grid.ap1_i1 : grid.lead1_i1;
    for (int i = i0; i <= i1; ++i)
      dofs.push_back(dof_at(i, j));
  }
  else
  {
    const int j = -grid.ny_cav - local_row;
    const int i0 = local_row == 0 ? grid.ap2_i0 : grid.lead2_i0;
    const int i1 = local_row == 0 ? grid.ap2_i1 : grid.lead2_i1;
    for (int i = i0; i <= i1; ++i)
      dofs.push_back(dof_at(i, j));
  }
  return dofs;
}

DomainLayout build_layout(const BilliardGeometry& g, const DiscretizationParams& d,
                          LeadTreatment treatment)
{
  DomainLayout L;
  L.geom = g;
  L.treatment = treatment;
  L.grid = make_grid(g, d, treatment != LeadTreatment::None);
  const Grid& gr = L.grid;

  const int lead_rows = treatment == LeadTreatment::None ? 0
                        : treatment == LeadTreatment::Ecs ? gr.j_cap
                                                          : gr.js;
  const bool lead2 = g.lead2_enabled && treatment != LeadTreatment::None;
  L.j_lo = -gr.ny_cav - (lead2 ? lead_rows : 0);
  L.j_hi = lead_rows;
  L.table.assign(static_cast<std::size_t>(L.j_hi - L.j_lo + 1) * (gr.nx + 1), -1);

  auto classify = [&](int i, int j) -> bool {
    if (j > 0) // lead 1 interior
      return treatment != LeadTreatment::None && i >= gr.lead1_i0 && i <= gr.lead1_i1;
    if (j == 0) // slide opening in the top wall
      return treatment != LeadTreatment::None && i >= gr.ap1_i0 && i <= gr.ap1_i1;
    if (j > -gr.ny_cav) // cavity interior
    {
      if (i <= 0 || i >= gr.nx)
        return false;
      return !inside_scatterer(g, gr.x_of(i), gr.y_of(j));
    }
    if (j == -gr.ny_cav) // slide opening in the bottom wall
      return lead2 && i >= gr.ap2_i0 && i <= gr.ap2_i1;
    // lead 2 interior
    return lead2 && i >= gr.lead2_i0 && i <= gr.lead2_i1;
  };

  for (int j = L.j_lo; j <= L.j_hi; ++j)
    for (int i = 0; i <= gr.nx; ++i)
      if (classify(i, j))
      {
        L.table[static_cast<std::size_t>(j - L.j_lo) * (gr.nx + 1) + i] =
            static_cast<int>(L.nodes.size());
        L.nodes.push_back({i, j});
      }
  return L;
}

SpMatC build_operator(const DomainLayout& L, double theta)
{
  const Grid& gr = L.grid;
  const Complex scale_f = std::polar(1.0, theta);

  // Metric factor of the y-segment between lattice rows j and j+1: e^{i
  // theta} beyond the scaling onset inside a lead, 1 everywhere else.
  auto f_seg = [&](int j_lower) -> Complex {
    if (theta == 0.0 || L.treatment != LeadTreatment::Ecs)
      return 1.0;
    if (j_lower >= gr.js) // lead 1, beyond the onset
      return scale_f;
    if (j_lower + 1 <= -gr.ny_cav - gr.js) // lead 2, beyond the onset
      return scale_f;
    return 1.0;
  };

  const int n = L.n();
  Eigen::VectorXcd mass_sqrt(n);
  for (int d = 0; d < n; ++d)
  {
    const NodeRef nd = L.nodes[static_cast<std::size_t>(d)];
    mass_sqrt[d] = std::sqrt(0.5 * (f_seg(nd.j - 1) + f_seg(nd.j)));
  }

  const double ihx2 = 1.0 / (gr.hx * gr.hx);
  const double ihy2 = 1.0 / (gr.hy * gr.hy);

  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(n) * 5);
  for (int d = 0; d < n; ++d)
  {
    const NodeRef nd = L.nodes[static_cast<std::size_t>(d)];
    const Complex m = mass_sqrt[d] * mass_sqrt[d];
    Complex diag = 2.0 * m * ihx2; // x-part carries the row mass factor

    for (int di : {-1, 1})
    {
      const int e = L.dof_at(nd.i + di, nd.j);
      if (e >= 0)
        trips.emplace_back(d, e, -m * ihx2 / (mass_sqrt[d] * mass_sqrt[e]));
    }
    for (int dj : {-1, 1})
    {
      const Complex f = f_seg(dj < 0 ? nd.j - 1 : nd.j);
      diag += ihy2 / f;
      const int e = L.dof_at(nd.i, nd.j + dj);
      if (e >= 0)
        trips.emplace_back(d, e, -(ihy2 / f) / (mass_sqrt[d] * mass_sqrt[e]));
    }
    trips.emplace_back(d, d, diag / m);
  }

  SpMatC A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

} // namespace reslab
