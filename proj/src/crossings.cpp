// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "reslab/sweep.hpp"

namespace reslab
{

const char* to_string(CrossingKind k)
{
  switch (k)
  {
  case CrossingKind::EnergyRepulsion: return "energy-repulsion";
  case CrossingKind::WidthBifurcation: return "width-bifurcation";
  case CrossingKind::FreeEnergyCrossing: return "free-energy-crossing";
  case CrossingKind::FreeWidthCrossing: return "free-width-crossing";
  }
  return "?";
}

namespace
{

// Median nearest-neighbor complex distance across all successful steps; the
// default interaction threshold is twice this.
double median_spacing(const SweepResult& r)
{
  std::vector<double> spacings;
  const int n_steps = static_cast<int>(r.parameter.size());
  for (int t = 0; t < n_steps; ++t)
  {
    std::vector<Complex> here;
    for (const Trajectory& traj : r.trajectories)
      if (traj.covers(t))
        here.push_back(traj.at(t).value());
    std::sort(here.begin(), here.end(), [](Complex a, Complex b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (std::size_t k = 1; k < here.size(); ++k)
      spacings.push_back(std::abs(here[k] - here[k - 1]));
  }
  if (spacings.empty())
    return 0.0;
  std::nth_element(spacings.begin(), spacings.begin() + spacings.size() / 2, spacings.end());
  return spacings[spacings.size() / 2];
}

struct PairWindow
{
  std::vector<double> dre, dim; // per-step differences inside the window
};

// first strict sign change (transversal crossing) in d. Values at roundoff
// scale are treated as zero: a projection locked at zero over several steps
// (past an exceptional point) is not a crossing, but a single zero sample
// where the sweep grid hits the crossing exactly is.
struct Flip
{
  int lo = -1;
  int hi = -1;
  bool found() const { return lo >= 0; }
};

Flip strict_flip(const std::vector<double>& d, double tol)
{
  for (std::size_t t = 0; t + 1 < d.size(); ++t)
    if (std::abs(d[t]) > tol && std::abs(d[t + 1]) > tol && d[t] * d[t + 1] < 0.0)
      return {static_cast<int>(t), static_cast<int>(t + 1)};
  for (std::size_t t = 0; t + 2 < d.size(); ++t)
    if (std::abs(d[t]) > tol && std::abs(d[t + 2]) > tol && std::abs(d[t + 1]) <= tol &&
        d[t] * d[t + 2] < 0.0)
      return {static_cast<int>(t), static_cast<int>(t + 2)};
  return {};
}

// true when |d| dips in the interior to less than half of both edge values
bool interior_dip(const std::vector<double>& d)
{
  if (d.size() < 3)
    return false;
  double inner = std::abs(d[1]);
  for (std::size_t t = 1; t + 1 < d.size(); ++t)
    inner = std::min(inner, std::abs(d[t]));
  return inner < 0.5 * std::abs(d.front()) && inner < 0.5 * std::abs(d.back());
}

// |x| and |y| comparable at both window edges (no dramatic growth/decay)
bool stable_edges(const std::vector<double>& d)
{
  const double a = std::abs(d.front());
  const double b = std::abs(d.back());
  return std::max(a, b) <= 3.0 * std::min(a, b) + 1e-300;
}

// separation ratio: 1 = purely energy-separated, 0 = purely width-separated
double sep_ratio(double dre, double dim)
{
  const double num = std::abs(dre);
  const double den = num + std::abs(dim);
  return den > 0.0 ? num / den : 0.5;
}

CrossingKind classify(const PairWindow& w, double tol, double dominance)
{
  const Flip fre = strict_flip(w.dre, tol);
  const Flip fim = strict_flip(w.dim, tol);

  if (fre.found() && !fim.found())
  {
    // energies cross; free only if the width separation dominates while
    // passing through and is not itself reshaped by the encounter
    const bool ratio = std::abs(w.dre[static_cast<std::size_t>(fre.lo)]) <
                           dominance * std::abs(w.dim[static_cast<std::size_t>(fre.lo)]) &&
                       std::abs(w.dre[static_cast<std::size_t>(fre.hi)]) <
                           dominance * std::abs(w.dim[static_cast<std::size_t>(fre.hi)]);
    if (ratio && stable_edges(w.dim))
      return CrossingKind::FreeEnergyCrossing;
  }
  if (fim.found() && !fre.found())
  {
    const bool ratio = std::abs(w.dim[static_cast<std::size_t>(fim.lo)]) <
                           dominance * std::abs(w.dre[static_cast<std::size_t>(fim.lo)]) &&
                       std::abs(w.dim[static_cast<std::size_t>(fim.hi)]) <
                           dominance * std::abs(w.dre[static_cast<std::size_t>(fim.hi)]);
    if (ratio && stable_edges(w.dre) && !interior_dip(w.dre))
      return CrossingKind::FreeWidthCrossing;
    // widths cross while the energy gap dips or reorganizes: level repulsion
    return CrossingKind::EnergyRepulsion;
  }

  // No transversal width crossing: decide by how the separation character
  // changes across the event (energy-separated vs width-separated).
  const double rho_l = sep_ratio(w.dre.front(), w.dim.front());
  const double rho_r = sep_ratio(w.dre.back(), w.dim.back());
  return rho_r >= rho_l ? CrossingKind::EnergyRepulsion : CrossingKind::WidthBifurcation;
}

} // namespace

std::vector<CrossingEvent> detect_crossings(const SweepResult& result,
                                            const CrossingOptions& opt)
{
  if (result.parameter.size() < 3)
    throw ValidationError("sweep", "crossing detection needs at least 3 steps");
  double g_max = opt.g_max;
  if (g_max <= 0.0)
  {
    g_max = 2.0 * median_spacing(result);
    if (g_max <= 0.0)
      g_max = std::numeric_limits<double>::infinity();
  }
  const int k = std::max(1, opt.window);

  std::vector<CrossingEvent> events;
  const int n_traj = static_cast<int>(result.trajectories.size());
  for (int a = 0; a < n_traj; ++a)
    for (int b = a + 1; b < n_traj; ++b)
    {
      const Trajectory& ta = result.trajectories[static_cast<std::size_t>(a)];
      const Trajectory& tb = result.trajectories[static_cast<std::size_t>(b)];
      const int t0 = std::max(ta.first_step, tb.first_step);
      const int t1 = std::min(ta.last_step(), tb.last_step());
      if (t1 - t0 + 1 < 3)
        continue;

      std::vector<double> gap;
      double scale = 1.0;
      for (int t = t0; t <= t1; ++t)
      {
        const Complex d = ta.at(t).value() - tb.at(t).value();
        gap.push_back(std::abs(d));
        scale = std::max(scale, std::abs(ta.at(t).value()));
      }

      for (int t = t0 + 1; t < t1; ++t)
      {
        const std::size_t i = static_cast<std::size_t>(t - t0);
        if (!(gap[i] < gap[i - 1] && gap[i] <= gap[i + 1] && gap[i] <= g_max))
          continue;
        const int lo = std::max(t0, t - k);
        const int hi = std::min(t1, t + k);
        PairWindow w;
        for (int s = lo; s <= hi; ++s)
        {
          w.dre.push_back(ta.at(s).re - tb.at(s).re);
          w.dim.push_back(ta.at(s).im - tb.at(s).im);
        }
        CrossingEvent ev;
        ev.parameter = result.parameter[static_cast<std::size_t>(t)];
        ev.traj_a = a;
        ev.traj_b = b;
        ev.min_gap = gap[i];
        ev.branch_point_candidate = gap[i] <= 1e-8 * scale;
        ev.kind = classify(w, 1e-12 * scale, opt.ratio);
        events.push_back(ev);
      }
    }

  std::sort(events.begin(), events.end(), [](const CrossingEvent& x, const CrossingEvent& y) {
    if (x.parameter != y.parameter)
      return x.parameter < y.parameter;
    if (x.traj_a != y.traj_a)
      return x.traj_a < y.traj_a;
    return x.traj_b < y.traj_b;
  });
  return events;
}

} // namespace reslab
