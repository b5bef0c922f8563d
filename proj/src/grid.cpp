// SPDX-License-Identifier: Apache-2.0
#include "reslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace reslab
{

void validate_geometry(const BilliardGeometry& g)
{
  if (!(std::isfinite(g.x_r) && std::isfinite(g.y_d) && std::isfinite(g.slide_w)))
    throw ValidationError("geometry", "all coordinates must be finite");
  if (g.x_r < 1.5)
    throw ValidationError("x_r", "right wall must satisfy x_r >= 1.5");
  if (g.y_d > -3.0)
    throw ValidationError("y_d", "bottom wall must satisfy y_d <= -3 (area >= 3x3)");
  if (g.area() < 9.0 - 1e-12)
    throw ValidationError("y_d", "cavity area must be >= 9");
  if (g.slide_w < 0.0 || g.slide_w > 0.5)
    throw ValidationError("slide_w", "slide parameter must lie in [0, 0.5]");
  if (g.scatterer_enabled)
  {
    if (!(g.scatterer_radius > 0.0))
      throw ValidationError("scatterer_radius", "must be > 0 when the scatterer is enabled");
    const double r = g.scatterer_radius;
    if (g.scatterer_x - r <= g.x_l || g.scatterer_x + r >= g.x_r ||
        g.scatterer_y - r <= g.y_d || g.scatterer_y + r >= 0.0)
      throw ValidationError("scatterer",
                            "disk must lie strictly inside the cavity walls");
  }
}

void validate_discretization(const DiscretizationParams& d)
{
  if (!(d.h > 0.0) || d.h > 0.1)
    throw ValidationError("h", "grid spacing must satisfy 0 < h <= 0.1");
  if (!(d.ecs_theta > 0.0) || d.ecs_theta >= 1.5707963267948966)
    throw ValidationError("ecs_theta", "scaling angle must lie in (0, pi/2)");
  if (d.lead_length < 3.0)
    throw ValidationError("lead_length", "scaled lead must be at least 3 wide");
  if (d.ecs_start <= 0.0)
    throw ValidationError("ecs_start", "scaling onset must be > 0");
  if (d.n_modes < 3)
    throw ValidationError("n_modes", "at least 3 transverse modes required");
}

namespace
{

// Geometry x-breakpoints are rationalized on a 1e-4 lattice so a common grid
// spacing exists exactly.
std::int64_t to_ticks(double offset)
{
  const double scaled = offset * 1e4;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-3)
    throw ValidationError("geometry",
                          "x-coordinates must be multiples of 1e-4 to align with the "
                          "grid (offending offset " +
                              std::to_string(offset) + ")");
  return static_cast<std::int64_t>(rounded);
}

int index_of(double x, double hx)
{
  return static_cast<int>(std::lround((x - BilliardGeometry::x_l) / hx));
}

} // namespace

Grid make_grid(const BilliardGeometry& g, const DiscretizationParams& d, bool with_leads)
{
  validate_geometry(g);
  validate_discretization(d);

  // Every wall, lead edge, and slide edge must land on the x lattice.
  std::vector<double> offsets = {g.x_r - g.x_l};
  offsets.push_back(1.0);            // lead-1 right edge at x = -0.5
  offsets.push_back(g.slide_w);      // slide left edge
  offsets.push_back(1.0 - g.slide_w);
  if (g.lead2_enabled)
  {
    offsets.push_back(g.x_r - 1.0 - g.x_l);
    offsets.push_back(g.x_r - 1.0 + g.slide_w - g.x_l);
    offsets.push_back(g.x_r - g.slide_w - g.x_l);
  }

  std::int64_t ticks_gcd = 0;
  for (double off : offsets)
  {
    const std::int64_t t = to_ticks(off);
    if (t != 0)
      ticks_gcd = std::gcd(ticks_gcd, t);
  }
  const double hx_max = static_cast<double>(ticks_gcd) * 1e-4;
  const int kx = std::max(1, static_cast<int>(std::ceil(hx_max / d.h - 1e-9)));

  Grid grid;
  grid.hx = hx_max / kx;
  grid.nx = static_cast<int>(std::lround((g.x_r - g.x_l) / grid.hx));

  grid.ny_cav = std::max(1, static_cast<int>(std::ceil(g.height() / d.h - 1e-9)));
  grid.hy = g.height() / grid.ny_cav;

  // Lead-1 interior columns (side walls at -1.5 and -0.5 are Dirichlet).
  grid.lead1_i0 = 1;
  grid.lead1_i1 = index_of(-0.5, grid.hx) - 1;

  // Slide opening: interior nodes strictly inside (x_l + w, -0.5 - w).
  const double ap_lo = g.x_l + g.slide_w;
  const double ap_hi = -0.5 - g.slide_w;
  grid.ap1_i0 = index_of(ap_lo, grid.hx) + 1;
  grid.ap1_i1 = index_of(ap_hi, grid.hx) - 1;

  if (g.lead2_enabled)
  {
    grid.lead2_i0 = index_of(g.x_r - 1.0, grid.hx) + 1;
    grid.lead2_i1 = grid.nx - 1;
    grid.ap2_i0 = index_of(g.x_r - 1.0 + g.slide_w, grid.hx) + 1;
    grid.ap2_i1 = index_of(g.x_r - g.slide_w, grid.hx) - 1;
  }

  if (with_leads)
  {
    grid.js = std::max(1, static_cast<int>(std::ceil(d.ecs_start / grid.hy - 1e-9)));
    const int scaled_rows =
        std::max(1, static_cast<int>(std::ceil(d.lead_length / grid.hy - 1e-9)));
    grid.j_cap = grid.js + scaled_rows;
    grid.ecs_start_actual = grid.js * grid.hy;
    grid.lead_length_actual = scaled_rows * grid.hy;
  }
  return grid;
}

} // namespace reslab
