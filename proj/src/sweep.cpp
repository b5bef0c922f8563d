// SPDX-License-Identifier: Apache-2.0
#include "reslab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "reslab/billiard.hpp"
#include "reslab/eig.hpp"
#include "reslab/matching.hpp"
#include "reslab/scattering.hpp"

namespace reslab
{

const char* to_string(SweepParameter p)
{
  switch (p)
  {
  case SweepParameter::y_d: return "y_d";
  case SweepParameter::x_r: return "x_r";
  case SweepParameter::slide_w: return "slide_w";
  case SweepParameter::v_in: return "v_in";
  case SweepParameter::w_ex: return "w_ex";
  }
  return "?";
}

bool is_schematic(SweepParameter p)
{
  return p == SweepParameter::v_in || p == SweepParameter::w_ex;
}

namespace
{

std::vector<double> grid_values(const SweepSpec& spec)
{
  if (spec.step == 0.0)
    throw ValidationError("step", "sweep step must be nonzero");
  const double ratio = (spec.stop - spec.start) / spec.step;
  if (!(ratio > 1.0))
    throw ValidationError("step", "sweep must cover more than one step");
  const int n = static_cast<int>(std::floor(ratio + 1e-9)) + 1;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t)
    v[static_cast<std::size_t>(t)] = spec.start + t * spec.step;
  return v;
}

// One step's states: energies sorted the way the solver returned them.
struct StepStates
{
  std::vector<ComplexEnergy> energies;
  std::vector<Eigen::VectorXd> mixing; // filled when the sweep carries mixing
  double biorthogonality = std::numeric_limits<double>::quiet_NaN();
};

StepStates solve_step(const SweepSpec& spec, double value, int& factorizations)
{
  StepStates out;
  if (is_schematic(spec.parameter))
  {
    TwoLevelParams p = spec.two_level;
    (spec.parameter == SweepParameter::v_in ? p.v_in : p.w_ex) = value;
    const ResonanceSet set = eig_complex_symmetric(build_two_level(p));
    for (const ResonanceState& s : set.states)
    {
      out.energies.push_back(s.energy);
      // expansion over the unperturbed basis: the vector components themselves
      out.mixing.push_back(s.vector.cwiseAbs());
    }
    out.biorthogonality = set.biorthogonality;
  }
  else
  {
    BilliardGeometry g = spec.geometry;
    switch (spec.parameter)
    {
    case SweepParameter::y_d: g.y_d = value; break;
    case SweepParameter::x_r: g.x_r = value; break;
    default: g.slide_w = value; break;
    }
    const PoleResult pr = find_poles(g, spec.disc, spec.e_lo, spec.e_hi);
    factorizations += pr.factorizations;
    for (const ResonanceState& s : pr.set.states)
      out.energies.push_back(s.energy);
    if (!pr.set.empty())
      out.biorthogonality = pr.set.biorthogonality;
    if (spec.mixing)
    {
      const ClosedSpectrum closed = closed_spectrum(g, spec.disc, spec.e_lo, spec.e_hi);
      factorizations += closed.factorizations;
      const Eigen::MatrixXcd b = mixing_against_closed(pr, closed);
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        out.mixing.push_back(b.row(r).cwiseAbs().transpose());
    }
  }
  return out;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec)
{
  SweepResult result;
  result.parameter_kind = spec.parameter;
  result.parameter = grid_values(spec);
  const int n_steps = static_cast<int>(result.parameter.size());

  // trajectory id currently carrying state i of the previous successful step
  std::vector<int> active;
  std::vector<ComplexEnergy> prev;
  bool have_prev = false;

  for (int t = 0; t < n_steps; ++t)
  {
    const double value = result.parameter[static_cast<std::size_t>(t)];
    StepDiagnostics diag;
    StepStates states;
    try
    {
      states = solve_step(spec, value, result.factorizations);
      diag.ok = true;
    }
    catch (const Error& e)
    {
      diag.error = e.what();
      std::ostringstream msg;
      msg << "step " << t << " (" << to_string(spec.parameter) << " = " << value
          << ") failed: " << e.what();
      result.warnings.push_back(msg.str());
      // a gap closes every open trajectory so index ranges stay contiguous
      active.clear();
      prev.clear();
      have_prev = false;
      result.diagnostics.push_back(diag);
      continue;
    }

    diag.state_count = static_cast<int>(states.energies.size());
    double wsum = 0.0;
    for (const ComplexEnergy& e : states.energies)
      wsum += e.width();
    diag.width_sum = std::max(wsum, 0.0); // roundoff can leave -1e-10 widths
    diag.biorthogonality = states.biorthogonality;
    result.diagnostics.push_back(diag);

    std::vector<int> next_active(states.energies.size(), -1);
    if (have_prev)
    {
      const Assignment a = match_energies(prev, states.energies, spec.match_gate);
      for (const auto& [i, j] : a.pairs)
        next_active[static_cast<std::size_t>(j)] = active[static_cast<std::size_t>(i)];
    }
    for (std::size_t j = 0; j < states.energies.size(); ++j)
    {
      if (next_active[j] < 0)
      {
        next_active[j] = static_cast<int>(result.trajectories.size());
        Trajectory traj;
        traj.first_step = t;
        result.trajectories.push_back(traj);
      }
      Trajectory& traj = result.trajectories[static_cast<std::size_t>(next_active[j])];
      traj.energies.push_back(states.energies[j]);
      if (j < states.mixing.size())
        traj.mixing.push_back(states.mixing[j]);
    }
    active = std::move(next_active);
    prev = std::move(states.energies);
    have_prev = true;
  }

  // continuity flags: displacement per tracked step against the median
  std::vector<double> disp;
  for (const Trajectory& traj : result.trajectories)
    for (std::size_t k = 1; k < traj.energies.size(); ++k)
      disp.push_back(std::abs(traj.energies[k].value() - traj.energies[k - 1].value()));
  if (disp.size() >= 4)
  {
    std::vector<double> sorted = disp;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (median > 0.0)
    {
      for (std::size_t id = 0; id < result.trajectories.size(); ++id)
      {
        const Trajectory& traj = result.trajectories[id];
        for (std::size_t k = 1; k < traj.energies.size(); ++k)
        {
          const double d = std::abs(traj.energies[k].value() - traj.energies[k - 1].value());
          if (d > 10.0 * median)
          {
            std::ostringstream msg;
            msg << "continuity: trajectory " << id << " jumps by " << d << " at step "
                << traj.first_step + static_cast<int>(k) << " (median displacement "
                << median << ")";
            result.warnings.push_back(msg.str());
          }
        }
      }
    }
  }
  return result;
}

std::pair<double, double> width_sum_diagnostic(const SweepResult& result)
{
  std::vector<double> sums;
  bool any_state = false;
  for (const StepDiagnostics& d : result.diagnostics)
    if (d.ok)
    {
      sums.push_back(d.width_sum);
      any_state = any_state || d.state_count > 0;
    }
  if (sums.empty() || !any_state)
    throw EmptyWindowError("width-sum diagnostic: no states in the sweep window");
  double mean = 0.0;
  for (double s : sums)
    mean += s;
  mean /= static_cast<double>(sums.size());
  if (mean < 1e-6)
    return {mean, 0.0}; // sealed cavity: fluctuation undefined, reported as 0
  double fluct = 0.0;
  for (double s : sums)
    fluct = std::max(fluct, std::abs(s - mean) / mean);
  return {mean, fluct};
}

ConductanceTable integrated_conductance(const BilliardGeometry& geom,
                                        const DiscretizationParams& disc,
                                        const std::vector<double>& w_values,
                                        const std::vector<std::pair<double, double>>& bands)
{
  if (!geom.lead2_enabled)
    throw ValidationError("lead2_enabled", "conductance integration needs both leads");
  if (w_values.empty() || bands.empty())
    throw ValidationError("bands", "need at least one slide value and one band");

  ConductanceTable table;
  table.w_values = w_values;

  // Clamp the requested bands inside the usable one-mode window of the grid
  // that the first geometry actually produces (hx is slide-independent here
  // only if the slide edges stay on the same ticks; recompute per w below).
  for (const auto& [lo, hi] : bands)
  {
    if (!(lo < hi) || lo < kThreshold1 - 1e-9 || hi > kThreshold2 + 1e-9)
      throw ValidationError("bands", "band must lie inside (pi^2, 4 pi^2)");
    table.bands.emplace_back(lo, hi);
  }

  for (double w : w_values)
  {
    BilliardGeometry g = geom;
    g.slide_w = w;
    const Grid probe = make_grid(g, disc, true);
    const double top = discrete_threshold(2, probe.hx) - 1e-3;
    const double bottom = kThreshold1 + 1e-3;

    // one pole search per slide value, shared across bands, padded so poles
    // just outside a band still seed its segments
    double lo_all = bands.front().first, hi_all = bands.front().second;
    for (const auto& [lo, hi] : bands)
    {
      lo_all = std::min(lo_all, lo);
      hi_all = std::max(hi_all, hi);
    }
    const PoleResult pr =
        find_poles(g, disc, std::max(kThreshold1 + 1e-6, lo_all - 2.0),
                   std::min(kThreshold2 - 1e-6, hi_all + 2.0));
    table.factorizations += pr.factorizations;

    // memoized conductance evaluations; keys are exact node positions
    std::map<double, double> cache;
    auto G = [&](double E) {
      auto it = cache.find(E);
      if (it != cache.end())
        return it->second;
      double val;
      try
      {
        val = conductance(g, disc, E);
      }
      catch (const SingularSystemError&)
      {
        // a quadrature node can land on an eigenvalue of a decoupled block;
        // the integral does not care about a measure-zero shift
        val = conductance(g, disc, E + 1e-9 * std::max(1.0, std::abs(E)));
      }
      cache.emplace(E, val);
      ++table.evaluations;
      return val;
    };
    auto simpson = [&](double a, double b) {
      return (b - a) / 6.0 * (G(a) + 4.0 * G(0.5 * (a + b)) + G(b));
    };

    std::vector<double> row;
    for (const auto& [band_lo, band_hi] : table.bands)
    {
      const double a = std::max(band_lo, bottom);
      const double b = std::min(band_hi, top);
      if (!(a < b))
      {
        row.push_back(0.0);
        continue;
      }
      // segment boundaries: band edges, a coarse uniform split, and a tight
      // bracket around each pole energy (the integrand peaks there)
      std::vector<double> cuts{a, b};
      for (int k = 1; k < 8; ++k)
        cuts.push_back(a + (b - a) * k / 8.0);
      for (const ResonanceState& s : pr.set.states)
      {
        const double e0 = s.energy.re;
        const double gamma = std::max(s.energy.width(), 1e-4);
        for (double e : {e0 - gamma, e0, e0 + gamma})
        {
          // a bound state sealed off from the leads makes the solve at its
          // exact energy singular; bracketing it is enough
          if (e == e0 && s.energy.width() <= 1e-8)
            continue;
          if (e > a + 1e-9 && e < b - 1e-9)
            cuts.push_back(e);
        }
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end(),
                             [](double x, double y) { return std::abs(x - y) < 1e-9; }),
                 cuts.end());

      std::vector<double> seg_val;
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        seg_val.push_back(simpson(cuts[k], cuts[k + 1]));

      double total = 0.0;
      for (double v : seg_val)
        total += v;
      // halve every segment until the band total settles below 1%
      for (int round = 0; round < 10; ++round)
      {
        std::vector<double> next_cuts;
        std::vector<double> next_val;
        double next_total = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        {
          const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
          next_cuts.push_back(cuts[k]);
          next_cuts.push_back(mid);
          next_val.push_back(simpson(cuts[k], mid));
          next_val.push_back(simpson(mid, cuts[k + 1]));
          next_total += next_val[next_val.size() - 2] + next_val.back();
        }
        next_cuts.push_back(cuts.back());
        const double change = std::abs(next_total - total);
        cuts = std::move(next_cuts);
        seg_val = std::move(next_val);
        total = next_total;
        if (change < 0.01 * std::max(std::abs(total), 1e-12))
          break;
      }
      row.push_back(total);
    }
    table.value.push_back(std::move(row));
  }
  return table;
}

} // namespace reslab
