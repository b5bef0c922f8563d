// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reslab/billiard.hpp"
#include "reslab/config.hpp"
#include "reslab/scattering.hpp"
#include "reslab/sweep.hpp"
#include "reslab/types.hpp"

namespace reslab
{

// One scattering-table row. Optional columns are flagged rather than NaN so
// the CSV can leave them empty.
struct ScatterRow
{
  double E = 0.0;
  Complex R{0.0, 0.0};
  double G = 0.0;
  double delay = 0.0;
  bool has_G = false;
  bool has_delay = false;
};

// Everything a run produced, in memory. Only the fields relevant to the
// config's mode are populated.
struct RunOutput
{
  RunMode mode = RunMode::SchematicSweep;

  SweepResult sweep;                    // schematic-sweep, billiard-sweep
  std::vector<CrossingEvent> crossings; // sweep modes
  bool has_width_summary = false;       // billiard-sweep
  double width_mean = 0.0;
  double width_fluctuation = 0.0;

  PoleResult poles;       // poles mode
  ClosedSpectrum closed;  // poles mode: reference basis
  Eigen::MatrixXcd mixing; // poles mode: |rows| = poles, |cols| = closed states

  std::vector<ScatterRow> rows; // scatter, conduct
  // Full solutions kept only when field output was requested (scatter mode).
  std::vector<ScatteringSolution> scatter_solutions;

  ConductanceTable conductance; // integrated-conductance

  long long factorizations = 0; // accumulated over all solves
  long evaluations = 0;         // scattering evaluations (integrated mode)
};

// Runs the computation a config describes. Throws the underlying solver
// errors unchanged.
RunOutput execute(const RunConfig& cfg);

// Writes the enabled output files into out_dir (created if missing) and
// returns the file names written, manifest last. Identical (output, config)
// pairs produce byte-identical files. Throws IoError on filesystem failure.
std::vector<std::string> emit_results(const RunOutput& out, const RunConfig& cfg,
                                      const std::string& out_dir);

} // namespace reslab
