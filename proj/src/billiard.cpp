// SPDX-License-Identifier: Apache-2.0
#include "reslab/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "reslab/eig.hpp"
#include "reslab/matching.hpp"

namespace reslab
{

namespace
{

constexpr double kPi = 3.141592653589793;

// Mean level spacing of the cavity from the leading Weyl term, used as the
// pitch of the shift ladder. The scatterer removes pi r^2 of area.
double weyl_spacing(const BilliardGeometry& g)
{
  double area = g.area();
  if (g.scatterer_enabled)
    area -= kPi * g.scatterer_radius * g.scatterer_radius;
  return 4.0 * kPi / area;
}

// At least 8 grid points per wavelength at the top of the window, otherwise
// the 5-point scheme is too inaccurate to be worth running.
void require_resolved(const Grid& grid, double e_hi)
{
  if (e_hi <= 0.0)
    return;
  const double wavelength = 2.0 * kPi / std::sqrt(e_hi);
  const double h = std::max(grid.hx, grid.hy);
  if (h > wavelength / 8.0 + 1e-12)
    throw GridTooCoarseError("fewer than 8 points per wavelength at E = " +
                             std::to_string(e_hi) + " (h = " + std::to_string(h) +
                             ", need <= " + std::to_string(wavelength / 8.0) + ")");
}

bool same_lattice(const DomainLayout& a, const DomainLayout& b)
{
  return a.grid.hx == b.grid.hx && a.grid.hy == b.grid.hy && a.grid.nx == b.grid.nx &&
         a.grid.ny_cav == b.grid.ny_cav && a.geom.x_r == b.geom.x_r &&
         a.geom.y_d == b.geom.y_d && a.geom.slide_w == b.geom.slide_w &&
         a.geom.scatterer_enabled == b.geom.scatterer_enabled &&
         a.geom.scatterer_x == b.geom.scatterer_x &&
         a.geom.scatterer_y == b.geom.scatterer_y &&
         a.geom.scatterer_radius == b.geom.scatterer_radius;
}

} // namespace

ClosedSpectrum closed_spectrum(const BilliardGeometry& g, const DiscretizationParams& d,
                               double e_lo, double e_hi)
{
  if (!(e_lo < e_hi))
    throw ValidationError("window", "closed_spectrum needs e_lo < e_hi");

  ClosedSpectrum out;
  out.layout = build_layout(g, d, LeadTreatment::None);
  require_resolved(out.layout.grid, e_hi);

  const SpMatC L = build_operator(out.layout, 0.0);
  WindowEigOptions opt;
  opt.spacing = weyl_spacing(g);
  WindowEig we = eigs_in_window(L, e_lo, e_hi, opt);
  out.factorizations = we.factorizations;
  out.warnings = std::move(we.warnings);

  // The sealed operator is real symmetric, so eigenvalues in the window must
  // come out real to solver accuracy; anything else is a solver artifact.
  struct Pair
  {
    double value;
    Eigen::VectorXcd vec;
  };
  std::vector<Pair> pairs;
  for (std::size_t k = 0; k < we.values.size(); ++k)
  {
    const Complex lam = we.values[k];
    if (std::abs(lam.imag()) > 1e-6 * std::max(1.0, std::abs(lam.real())))
    {
      out.warnings.push_back("discarding non-real eigenvalue of the sealed operator at re=" +
                             std::to_string(lam.real()));
      continue;
    }
    if (lam.real() < e_lo || lam.real() > e_hi)
      continue;
    pairs.push_back({lam.real(), we.vectors.col(static_cast<Eigen::Index>(k))});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.value < b.value; });

  const int n = out.layout.n();
  const double cell = out.layout.grid.hx * out.layout.grid.hy;
  out.modes.resize(n, static_cast<Eigen::Index>(pairs.size()));
  out.energies.reserve(pairs.size());

  // Realify mode by mode. Inside a degenerate cluster the complex vectors mix
  // the real eigenspace, so the real and imaginary parts are orthonormalized
  // against the modes already emitted for that cluster.
  std::size_t cluster_begin = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k)
  {
    if (k > 0 && pairs[k].value - pairs[k - 1].value >
                     1e-7 * std::max(1.0, std::abs(pairs[k].value)))
      cluster_begin = k;
    Eigen::VectorXd mode;
    double best = -1.0;
    for (int part = 0; part < 2; ++part)
    {
      Eigen::VectorXd cand = part == 0 ? pairs[k].vec.real().eval() : pairs[k].vec.imag().eval();
      for (std::size_t m = cluster_begin; m < k; ++m)
        cand -= (out.modes.col(static_cast<Eigen::Index>(m)).dot(cand) * cell) *
                out.modes.col(static_cast<Eigen::Index>(m));
      const double nrm = cand.norm();
      if (nrm > best)
      {
        best = nrm;
        mode = std::move(cand);
      }
    }
    if (best * best * cell < 1e-12)
    {
      out.warnings.push_back("degenerate cluster at E = " + std::to_string(pairs[k].value) +
                             " lost a basis vector");
      out.modes.col(static_cast<Eigen::Index>(k)).setZero();
      out.energies.push_back(pairs[k].value);
      continue;
    }
    mode /= mode.norm() * std::sqrt(cell); // sum(phi^2) hx hy = 1
    Eigen::Index imax = 0;
    mode.cwiseAbs().maxCoeff(&imax);
    if (mode[imax] < 0.0)
      mode = -mode;
    out.modes.col(static_cast<Eigen::Index>(k)) = mode;
    out.energies.push_back(pairs[k].value);
  }
  return out;
}

PoleResult find_poles(const BilliardGeometry& g, const DiscretizationParams& d,
                      double e_lo, double e_hi)
{
  if (!(e_lo < e_hi))
    throw ValidationError("window", "find_poles needs e_lo < e_hi");
  if (e_lo < kThreshold1 - 1e-9 || e_hi > kThreshold2 + 1e-9)
    throw ValidationError("window",
                          "pole window must lie inside the one-mode interval "
                          "(pi^2, (2 pi)^2)");
  const double dtheta = 0.1;
  if (d.ecs_theta + dtheta >= kPi / 2.0)
    throw ValidationError("ecs_theta",
                          "stability check needs ecs_theta + 0.1 < pi/2");

  PoleResult out;
  out.layout = build_layout(g, d, LeadTreatment::Ecs);
  require_resolved(out.layout.grid, e_hi);

  const SpMatC L1 = build_operator(out.layout, d.ecs_theta);
  const SpMatC L2 = build_operator(out.layout, d.ecs_theta + dtheta);

  WindowEigOptions opt;
  opt.spacing = weyl_spacing(g);
  // Margin keeps near-edge eigenvalues available so the cross-theta matching
  // does not pair a pole with an unrelated neighbor.
  opt.window_margin = 1.0;
  WindowEig run1 = eigs_in_window(L1, e_lo, e_hi, opt);
  WindowEig run2 = eigs_in_window(L2, e_lo, e_hi, opt);
  out.factorizations = run1.factorizations + run2.factorizations;
  out.warnings = std::move(run1.warnings);
  out.warnings.insert(out.warnings.end(), run2.warnings.begin(), run2.warnings.end());

  std::vector<ComplexEnergy> e1, e2;
  e1.reserve(run1.values.size());
  for (Complex v : run1.values)
    e1.emplace_back(v);
  e2.reserve(run2.values.size());
  for (Complex v : run2.values)
    e2.emplace_back(v);

  // A genuine pole stays put when the scaling contour rotates further; the
  // rotated-continuum eigenvalues swing by about 2 dtheta |E - threshold|.
  const Assignment match = match_energies(e1, e2, 0.5);
  struct Accepted
  {
    ComplexEnergy energy;
    double shift;
    Eigen::VectorXcd vec;
  };
  std::vector<Accepted> acc;
  for (auto [i, j] : match.pairs)
  {
    const Complex v1 = run1.values[static_cast<std::size_t>(i)];
    const Complex v2 = run2.values[static_cast<std::size_t>(j)];
    const double shift = std::abs(v1 - v2);
    if (shift > std::max(1e-3, 1e-3 * std::abs(v1)))
      continue;
    if (v1.imag() > 1e-10)
      continue; // poles live in the closed lower half-plane
    if (v1.real() < e_lo || v1.real() > e_hi)
      continue;
    acc.push_back({ComplexEnergy(v1), shift, run1.vectors.col(static_cast<Eigen::Index>(i))});
  }
  std::sort(acc.begin(), acc.end(), [](const Accepted& a, const Accepted& b) {
    if (a.energy.re != b.energy.re)
      return a.energy.re < b.energy.re;
    return a.energy.im > b.energy.im;
  });

  for (auto& a : acc)
  {
    ResonanceState st;
    st.energy = a.energy;
    std::tie(st.norm_sq, st.degenerate) = c_normalize(a.vec);
    st.vector = std::move(a.vec);
    out.set.states.push_back(std::move(st));
    out.theta_shift.push_back(a.shift);
  }
  if (!out.set.empty())
    out.set.biorthogonality = biorthogonality_measure(out.set);
  return out;
}

double fd_error_scale(double E, double h)
{
  return E * E * h * h / 6.0;
}

Eigen::MatrixXcd mixing_against_closed(const PoleResult& poles, const ClosedSpectrum& closed)
{
  if (!same_lattice(poles.layout, closed.layout))
    throw DimensionMismatchError(
        "mixing_against_closed: pole and closed layouts use different lattices");

  const Grid& gr = closed.layout.grid;
  const double cell = gr.hx * gr.hy;
  const Eigen::Index n_poles = static_cast<Eigen::Index>(poles.set.size());
  const Eigen::Index n_modes = static_cast<Eigen::Index>(closed.energies.size());
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n_poles, n_modes);

  // Bilinear overlap over the cavity interior. The pole vector has unit
  // lattice c-norm, so its physical (cell-weighted) normalization carries an
  // extra 1/sqrt(cell); in the unscaled cavity the symmetrized vector equals
  // the field itself. A pole fully confined to the cavity then reproduces a
  // closed mode with |b| = 1.
  const double factor = cell / std::sqrt(cell);
  for (int dof = 0; dof < closed.layout.n(); ++dof)
  {
    const NodeRef nd = closed.layout.nodes[static_cast<std::size_t>(dof)];
    const int pd = poles.layout.dof_at(nd.i, nd.j);
    if (pd < 0)
      continue;
    for (Eigen::Index r = 0; r < n_poles; ++r)
    {
      const Complex w = poles.set[static_cast<std::size_t>(r)].vector[pd];
      for (Eigen::Index m = 0; m < n_modes; ++m)
        b(r, m) += w * closed.modes(dof, m) * factor;
    }
  }
  return b;
}

} // namespace reslab
