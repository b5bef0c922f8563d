// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "reslab/types.hpp"

namespace reslab
{

// Rectangular cavity with a circular scatterer, coupled to one or two
// waveguides of unit width through slide apertures. The left wall is fixed at
// x = -1.5 and the top wall at y = 0; lead 1 sits on the top wall over
// x in [-1.5, -0.5] and extends upward, lead 2 (optional) on the bottom wall
// over x in [x_r - 1, x_r] extending downward. The slide covers the lead
// mouth symmetrically from both sides: the opening has width 1 - 2*slide_w
// centered in the mouth, so slide_w = 0.5 seals the cavity and slide_w = 0
// opens the full lead width.
struct BilliardGeometry
{
  static constexpr double x_l = -1.5;
  double x_r = 1.5;
  double y_d = -3.0;
  double slide_w = 0.15;
  bool scatterer_enabled = true;
  double scatterer_x = -0.2;
  double scatterer_y = -1.2;
  double scatterer_radius = 0.5;
  bool lead2_enabled = false;

  double width() const { return x_r - x_l; }
  double height() const { return -y_d; }
  double area() const
  {
    return width() * height();
  }
};

// Throws ValidationError on any violated geometry constraint (walls, minimum
// area 3x3, slide range, scatterer placement).
void validate_geometry(const BilliardGeometry& g);

struct DiscretizationParams
{
  double h = 0.05;         // target spacing; snapped per axis, see Grid
  double ecs_theta = 0.35; // complex-scaling angle in the lead
  double ecs_start = 2.0;  // distance from the mouth to the scaling onset
  double lead_length = 6.0; // scaled-lead length beyond the onset
  int n_modes = 3;         // transverse modes kept in the scattering boundary
};

void validate_discretization(const DiscretizationParams& d);

// Snapped finite-difference lattice. x nodes are x_l + i*hx for i = 0..nx;
// y levels are j*hy with j = 0 the top wall, j = -ny_cav the bottom wall,
// j > 0 inside lead 1 and j < -ny_cav inside lead 2. hx is chosen so every
// wall, lead edge, and slide edge lands exactly on a grid line (geometry
// x-coordinates must be multiples of 1e-4 for this to be well defined);
// hy divides |y_d| exactly.
struct Grid
{
  double hx = 0.0;
  double hy = 0.0;
  int nx = 0;     // number of x intervals; interior columns are 1..nx-1
  int ny_cav = 0; // number of y intervals across the cavity

  // Interior column ranges (inclusive); empty ranges have i0 > i1.
  int lead1_i0 = 0, lead1_i1 = -1; // lead 1 cross-section
  int ap1_i0 = 0, ap1_i1 = -1;     // slide opening in the lead-1 mouth
  int lead2_i0 = 0, lead2_i1 = -1;
  int ap2_i0 = 0, ap2_i1 = -1;

  // Lead row counts (same for both leads): js = rows from mouth to the
  // asymptotic-treatment onset (ECS onset / scattering matching plane),
  // j_cap = last interior row of the complex-scaled lead (Dirichlet cap at
  // j_cap + 1).
  int js = 0;
  int j_cap = 0;

  double ecs_start_actual = 0.0;
  double lead_length_actual = 0.0;

  double x_of(int i) const { return BilliardGeometry::x_l + i * hx; }
  double y_of(int j) const { return j * hy; }
};

// Builds the snapped lattice. with_leads = false lays out the sealed cavity
// only (closed-spectrum runs). Throws ValidationError if geometry coordinates
// cannot be aligned (not multiples of 1e-4).
Grid make_grid(const BilliardGeometry& g, const DiscretizationParams& d, bool with_leads);

// Lattice coordinates of one unknown.
struct NodeRef
{
  int i = 0;
  int j = 0;
};

} // namespace reslab
