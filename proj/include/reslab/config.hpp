// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "reslab/sweep.hpp"
#include "reslab/types.hpp"

namespace reslab
{

enum class RunMode
{
  SchematicSweep,        // two-level model, sweep v_in or w_ex
  Poles,                 // billiard pole search at fixed geometry
  Scatter,               // reflection/transmission over an energy grid
  Conduct,               // two-lead conductance over an energy grid
  BilliardSweep,         // billiard pole trajectories over y_d / x_r / slide_w
  IntegratedConductance, // band-integrated conductance vs slide_w
};

const char* to_string(RunMode m);

// A fully validated run description. The config file is line-oriented
// `key = value` with `#` comments; a swept parameter carries a triplet value
// `start : step : stop`, everything else is scalar. Unknown keys are errors.
struct RunConfig
{
  RunMode mode = RunMode::SchematicSweep;

  // Model, geometry, and sweep layout shared with the engine. For non-sweep
  // modes the geometry/discretization fields are still carried here.
  SweepSpec sweep;
  CrossingOptions crossings;

  // Scatter / conduct energy grid: single energy or inclusive triplet.
  double e_start = 0.0;
  double e_step = 0.0;
  double e_stop = 0.0;
  bool e_single = true;

  // Integrated-conductance energy bands.
  std::vector<std::pair<double, double>> bands;

  // Output formats.
  bool csv = true;
  bool json = true;
  bool svg = false;
  bool field = false;
};

// Parses and validates a config. Unknown or duplicate keys and malformed
// values raise ParseError with the 1-based line; values violating a model
// or geometry invariant raise ValidationError before any computation starts.
RunConfig parse_config(const std::string& text);

// Canonical text form: every key relevant to the mode, defaults included,
// 17-significant-digit reals. parse_config(print_config(c)) reproduces c.
std::string print_config(const RunConfig& cfg);

// Expands the scatter/conduct energy grid to concrete values.
std::vector<double> config_energy_grid(const RunConfig& cfg);

} // namespace reslab
