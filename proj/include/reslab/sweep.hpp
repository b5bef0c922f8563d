// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "reslab/geometry.hpp"
#include "reslab/two_level.hpp"
#include "reslab/types.hpp"

namespace reslab
{

// What the sweep varies. v_in / w_ex drive the two-level schematic model,
// the rest deform the billiard geometry.
enum class SweepParameter
{
  y_d,
  x_r,
  slide_w,
  v_in,
  w_ex,
};

const char* to_string(SweepParameter p);
bool is_schematic(SweepParameter p);

struct SweepSpec
{
  SweepParameter parameter = SweepParameter::w_ex;
  double start = 0.0;
  double stop = 1.0;
  double step = 0.01;
  TwoLevelParams two_level;      // template for schematic sweeps
  BilliardGeometry geometry;     // template for billiard sweeps
  DiscretizationParams disc;     // billiard discretization
  double e_lo = 15.0;            // pole window (billiard sweeps)
  double e_hi = 30.0;
  double match_gate = 1.0;       // max |dE| matched across one step
  // Schematic sweeps always carry the expansion of each eigenvector over the
  // unperturbed basis. For billiard sweeps the reference is the sealed-cavity
  // spectrum, which costs one extra eigensolve per step; off by default.
  bool mixing = false;
};

// One state tracked across contiguous sweep steps. The state enters at
// first_step and leaves after first_step + size - 1; a sweep-step failure
// closes every open trajectory (no holes inside a trajectory).
struct Trajectory
{
  int first_step = 0;
  std::vector<ComplexEnergy> energies;
  // Moduli of the expansion coefficients over the reference basis, one entry
  // per covered step (empty when mixing was not requested). Entry lengths can
  // differ between steps for billiard sweeps: the sealed basis is whatever
  // falls inside the window at that parameter value.
  std::vector<Eigen::VectorXd> mixing;

  int last_step() const { return first_step + static_cast<int>(energies.size()) - 1; }
  bool covers(int t) const { return t >= first_step && t <= last_step(); }
  const ComplexEnergy& at(int t) const
  {
    return energies[static_cast<std::size_t>(t - first_step)];
  }
};

struct StepDiagnostics
{
  bool ok = false;
  double width_sum = 0.0;     // sum of widths of in-window states
  int state_count = 0;
  double biorthogonality = 0.0; // NaN when the step has no states
  std::string error;            // failure reason when !ok
};

struct SweepResult
{
  SweepParameter parameter_kind = SweepParameter::w_ex;
  std::vector<double> parameter;          // swept values, one per step
  std::vector<Trajectory> trajectories;
  std::vector<StepDiagnostics> diagnostics;
  std::vector<std::string> warnings;      // per-step failures, continuity flags
  int factorizations = 0;
};

// Runs the sweep: per parameter value the schematic eigenproblem or the
// billiard pole search, matched step-to-step by minimal complex distance
// (pairs further than match_gate split into leave + enter). A failing step
// records a warning and a gap instead of aborting. Steps whose matched
// displacement exceeds 10x the median displacement are flagged in warnings.
// Deterministic for a fixed spec.
SweepResult run_sweep(const SweepSpec& spec);

// Mean of the per-step width sums and the maximum relative deviation from
// that mean, over successful steps. A mean below 1e-6 (sealed cavity)
// reports fluctuation 0. Throws EmptyWindowError when no successful step
// holds any state.
std::pair<double, double> width_sum_diagnostic(const SweepResult& result);

enum class CrossingKind
{
  EnergyRepulsion,
  WidthBifurcation,
  FreeEnergyCrossing,
  FreeWidthCrossing,
};

const char* to_string(CrossingKind k);

struct CrossingEvent
{
  double parameter = 0.0; // value at closest approach
  int traj_a = 0;
  int traj_b = 0;
  double min_gap = 0.0;   // |E_a - E_b| at closest approach
  CrossingKind kind = CrossingKind::EnergyRepulsion;
  bool branch_point_candidate = false; // gap at roundoff scale: exceptional point
};

struct CrossingOptions
{
  double g_max = 0.0; // gap threshold; <= 0 picks 2x the median level spacing
  int window = 3;     // steps inspected on each side of the closest approach
  double ratio = 0.1; // dominance factor splitting free crossings from avoided ones
};

// Finds local minima of the complex gap for every overlapping trajectory
// pair and classifies them. Classification reads the sweep in index order:
// energy-repulsion when the pair turns energy-separated (widths cross or the
// separation ratio flips toward energy), width-bifurcation for the reverse,
// free crossings when one projection changes sign while the other stays
// dominant and stable. Needs >= 3 sweep steps.
std::vector<CrossingEvent> detect_crossings(const SweepResult& result,
                                            const CrossingOptions& opt = {});

// Band-integrated two-lead conductance per slide value: composite Simpson on
// segments seeded at pole positions, refined until the band total changes by
// less than 1%. Band edges are clamped inside the one-mode operating window
// (above pi^2, below the lattice second threshold).
struct ConductanceTable
{
  std::vector<double> w_values;
  std::vector<std::pair<double, double>> bands; // requested (validated) bands
  std::vector<std::vector<double>> value;       // value[iw][iband]
  long evaluations = 0;                         // scattering solves performed
  int factorizations = 0;                       // pole-search factorizations
};

ConductanceTable integrated_conductance(const BilliardGeometry& geom,
                                        const DiscretizationParams& disc,
                                        const std::vector<double>& w_values,
                                        const std::vector<std::pair<double, double>>& bands);

} // namespace reslab
