// SPDX-License-Identifier: Apache-2.0
#include "reslab/emit.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reslab/field_io.hpp"
#include "reslab/scattering.hpp"
#include "reslab/svg.hpp"

namespace reslab
{

namespace
{

using ordered_json = nlohmann::ordered_json;

std::string num(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// CSV-quotes a free-text field (error messages can contain commas).
std::string csv_text(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"')
      out += "\"\"";
    else
      out.push_back(c);
  }
  out += "\"";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw IoError("cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.flush();
  if (!f)
    throw IoError("write failed for " + path.string());
}

std::vector<double> expand_triplet(double start, double step, double stop)
{
  const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t)
    v[static_cast<std::size_t>(t)] = start + t * step;
  return v;
}

BilliardGeometry representative_geometry(const RunConfig& cfg)
{
  BilliardGeometry g = cfg.sweep.geometry;
  if (cfg.mode == RunMode::BilliardSweep || cfg.mode == RunMode::IntegratedConductance)
  {
    switch (cfg.sweep.parameter)
    {
    case SweepParameter::y_d: g.y_d = cfg.sweep.start; break;
    case SweepParameter::x_r: g.x_r = cfg.sweep.start; break;
    case SweepParameter::slide_w: g.slide_w = cfg.sweep.start; break;
    default: break;
    }
  }
  return g;
}

// ---- CSV builders ---------------------------------------------------------

std::string states_csv(const SweepResult& r, bool schematic)
{
  std::ostringstream out;
  const char* param = to_string(r.parameter_kind);
  out << param << ",state,E,Gamma,B";
  if (schematic)
    out << ",b1,b2";
  out << "\n";
  for (std::size_t t = 0; t < r.parameter.size(); ++t)
  {
    const int step = static_cast<int>(t);
    for (std::size_t id = 0; id < r.trajectories.size(); ++id)
    {
      const Trajectory& traj = r.trajectories[id];
      if (!traj.covers(step))
        continue;
      const ComplexEnergy& e = traj.at(step);
      out << num(r.parameter[t]) << "," << id << "," << num(e.re) << "," << num(e.width())
          << "," << num(r.diagnostics[t].biorthogonality);
      if (schematic)
      {
        const Eigen::VectorXd& b =
            traj.mixing[static_cast<std::size_t>(step - traj.first_step)];
        out << "," << num(b(0)) << "," << num(b(1));
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string mixing_csv(const SweepResult& r)
{
  std::ostringstream out;
  out << to_string(r.parameter_kind) << ",state,basis,modulus\n";
  for (std::size_t t = 0; t < r.parameter.size(); ++t)
  {
    const int step = static_cast<int>(t);
    for (std::size_t id = 0; id < r.trajectories.size(); ++id)
    {
      const Trajectory& traj = r.trajectories[id];
      if (!traj.covers(step) || traj.mixing.empty())
        continue;
      const Eigen::VectorXd& b = traj.mixing[static_cast<std::size_t>(step - traj.first_step)];
      for (Eigen::Index j = 0; j < b.size(); ++j)
        out << num(r.parameter[t]) << "," << id << "," << j << "," << num(b(j)) << "\n";
    }
  }
  return out.str();
}

std::string diagnostics_csv(const SweepResult& r)
{
  std::ostringstream out;
  out << to_string(r.parameter_kind) << ",ok,state_count,width_sum,B,error\n";
  for (std::size_t t = 0; t < r.parameter.size(); ++t)
  {
    const StepDiagnostics& d = r.diagnostics[t];
    out << num(r.parameter[t]) << "," << (d.ok ? 1 : 0) << "," << d.state_count << ","
        << num(d.width_sum) << ",";
    if (std::isfinite(d.biorthogonality))
      out << num(d.biorthogonality);
    out << "," << csv_text(d.error) << "\n";
  }
  return out.str();
}

std::string crossings_csv(const std::vector<CrossingEvent>& events)
{
  std::ostringstream out;
  out << "parameter,traj_a,traj_b,min_gap,kind,branch_point\n";
  for (const CrossingEvent& e : events)
    out << num(e.parameter) << "," << e.traj_a << "," << e.traj_b << "," << num(e.min_gap)
        << "," << to_string(e.kind) << "," << (e.branch_point_candidate ? 1 : 0) << "\n";
  return out.str();
}

std::string poles_csv(const RunOutput& out)
{
  std::ostringstream csv;
  csv << "E,Gamma,B,theta_shift\n";
  for (std::size_t k = 0; k < out.poles.set.size(); ++k)
  {
    const ResonanceState& s = out.poles.set[k];
    csv << num(s.energy.re) << "," << num(s.width()) << "," << num(out.poles.set.biorthogonality)
        << "," << num(out.poles.theta_shift[k]) << "\n";
  }
  return csv.str();
}

std::string pole_mixing_csv(const RunOutput& out)
{
  std::ostringstream csv;
  csv << "state,basis,E_closed,modulus\n";
  for (Eigen::Index i = 0; i < out.mixing.rows(); ++i)
    for (Eigen::Index j = 0; j < out.mixing.cols(); ++j)
      csv << i << "," << j << "," << num(out.closed.energies[static_cast<std::size_t>(j)])
          << "," << num(std::abs(out.mixing(i, j))) << "\n";
  return csv.str();
}

std::string scatter_csv(const RunOutput& out)
{
  std::ostringstream csv;
  csv << "E,R_re,R_im,phase,G,delay\n";
  for (const ScatterRow& r : out.rows)
  {
    csv << num(r.E) << "," << num(r.R.real()) << "," << num(r.R.imag()) << ","
        << num(std::arg(r.R)) << ",";
    if (r.has_G)
      csv << num(r.G);
    csv << ",";
    if (r.has_delay)
      csv << num(r.delay);
    csv << "\n";
  }
  return csv.str();
}

std::string conductance_csv(const RunOutput& out)
{
  std::ostringstream csv;
  csv << "E,G\n";
  for (const ScatterRow& r : out.rows)
    csv << num(r.E) << "," << num(r.G) << "\n";
  return csv.str();
}

std::string integrated_csv(const ConductanceTable& t)
{
  std::ostringstream csv;
  csv << "slide_w,band_lo,band_hi,value\n";
  for (std::size_t iw = 0; iw < t.w_values.size(); ++iw)
    for (std::size_t ib = 0; ib < t.bands.size(); ++ib)
      csv << num(t.w_values[iw]) << "," << num(t.bands[ib].first) << ","
          << num(t.bands[ib].second) << "," << num(t.value[iw][ib]) << "\n";
  return csv.str();
}

// ---- SVG builders ---------------------------------------------------------

std::string trajectories_svg(const SweepResult& r)
{
  SvgPlot plot(std::string("pole trajectories vs ") + to_string(r.parameter_kind), "E",
               "Gamma");
  for (const Trajectory& traj : r.trajectories)
  {
    std::vector<double> xs, ys;
    for (const ComplexEnergy& e : traj.energies)
    {
      xs.push_back(e.re);
      ys.push_back(e.width());
    }
    plot.add_line(xs, ys);
    plot.add_points(xs, ys);
  }
  return plot.render();
}

std::string poles_svg(const RunOutput& out)
{
  SvgPlot plot("S-matrix poles", "E", "Gamma");
  std::vector<double> xs, ys;
  for (const ResonanceState& s : out.poles.set)
  {
    xs.push_back(s.energy.re);
    ys.push_back(s.width());
  }
  plot.add_points(xs, ys);
  return plot.render();
}

std::string scatter_svg(const RunOutput& out)
{
  SvgPlot plot("reflection phase", "E", "arg R");
  std::vector<double> xs, ys;
  for (const ScatterRow& r : out.rows)
  {
    xs.push_back(r.E);
    ys.push_back(std::arg(r.R));
  }
  plot.add_line(xs, ys);
  return plot.render();
}

std::string conductance_svg(const RunOutput& out)
{
  SvgPlot plot("conductance", "E", "G");
  std::vector<double> xs, ys;
  for (const ScatterRow& r : out.rows)
  {
    xs.push_back(r.E);
    ys.push_back(r.G);
  }
  plot.add_line(xs, ys);
  return plot.render();
}

std::string integrated_svg(const ConductanceTable& t)
{
  SvgPlot plot("band-integrated conductance", "slide_w", "integral of G");
  for (std::size_t ib = 0; ib < t.bands.size(); ++ib)
  {
    std::vector<double> xs, ys;
    for (std::size_t iw = 0; iw < t.w_values.size(); ++iw)
    {
      xs.push_back(t.w_values[iw]);
      ys.push_back(t.value[iw][ib]);
    }
    plot.add_line(xs, ys);
    plot.add_points(xs, ys);
  }
  return plot.render();
}

// ---- manifest -------------------------------------------------------------

ordered_json config_echo(const RunConfig& cfg)
{
  ordered_json echo = ordered_json::object();
  std::istringstream in(print_config(cfg));
  std::string line;
  while (std::getline(in, line))
  {
    const std::size_t eq = line.find(" = ");
    if (eq != std::string::npos)
      echo[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return echo;
}

bool is_billiard_mode(RunMode m)
{
  return m != RunMode::SchematicSweep;
}

std::string manifest_json(const RunOutput& out, const RunConfig& cfg,
                          const std::vector<std::string>& files)
{
  ordered_json m;
  m["mode"] = to_string(cfg.mode);
  m["config"] = config_echo(cfg);
  if (is_billiard_mode(cfg.mode))
  {
    // actual snapped lattice of the (sweep-start) geometry
    const Grid grid = make_grid(representative_geometry(cfg), cfg.sweep.disc, true);
    ordered_json s;
    s["hx"] = grid.hx;
    s["hy"] = grid.hy;
    s["nx"] = grid.nx;
    s["ny_cav"] = grid.ny_cav;
    s["matching_rows"] = grid.js;
    s["ecs_theta"] = cfg.sweep.disc.ecs_theta;
    s["ecs_start_actual"] = grid.ecs_start_actual;
    s["n_modes"] = cfg.sweep.disc.n_modes;
    m["solver"] = s;
  }
  if (out.has_width_summary)
  {
    m["width_sum"] = {{"mean", out.width_mean},
                      {"max_relative_fluctuation", out.width_fluctuation}};
  }
  m["effort"] = {{"factorizations", out.factorizations},
                 {"scattering_evaluations", out.evaluations}};
  ordered_json warn = ordered_json::array();
  for (const std::string& w : out.sweep.warnings)
    warn.push_back(w);
  for (const std::string& w : out.poles.warnings)
    warn.push_back(w);
  m["warnings"] = warn;
  ordered_json fl = ordered_json::array();
  for (const std::string& f : files)
    fl.push_back(f);
  m["files"] = fl;
  return m.dump(2) + "\n";
}

} // namespace

RunOutput execute(const RunConfig& cfg)
{
  RunOutput out;
  out.mode = cfg.mode;
  const BilliardGeometry& g = cfg.sweep.geometry;
  const DiscretizationParams& d = cfg.sweep.disc;

  switch (cfg.mode)
  {
  case RunMode::SchematicSweep:
  case RunMode::BilliardSweep:
  {
    out.sweep = run_sweep(cfg.sweep);
    out.factorizations = out.sweep.factorizations;
    if (out.sweep.parameter.size() >= 3)
      out.crossings = detect_crossings(out.sweep, cfg.crossings);
    if (cfg.mode == RunMode::BilliardSweep)
    {
      try
      {
        const auto [mean, fluct] = width_sum_diagnostic(out.sweep);
        out.width_mean = mean;
        out.width_fluctuation = fluct;
        out.has_width_summary = true;
      }
      catch (const EmptyWindowError&)
      {
        // nothing in the window at any step; the manifest just omits the block
      }
    }
    break;
  }
  case RunMode::Poles:
  {
    out.poles = find_poles(g, d, cfg.sweep.e_lo, cfg.sweep.e_hi);
    out.closed = closed_spectrum(g, d, cfg.sweep.e_lo, cfg.sweep.e_hi);
    out.mixing = mixing_against_closed(out.poles, out.closed);
    out.factorizations = out.poles.factorizations + out.closed.factorizations;
    break;
  }
  case RunMode::Scatter:
  {
    for (double E : config_energy_grid(cfg))
    {
      ScatteringSolution sol = scattering_solve(g, d, E);
      ScatterRow row;
      row.E = E;
      row.R = sol.S(0, 0);
      if (g.lead2_enabled)
      {
        row.G = std::norm(sol.S(1, 0));
        row.has_G = true;
      }
      out.factorizations += sol.factorizations;
      try
      {
        row.delay = time_delay(g, d, E);
        row.has_delay = true;
      }
      catch (const Error&)
      {
        // too close to a window edge (or a pole): leave the column empty
      }
      if (cfg.field)
        out.scatter_solutions.push_back(std::move(sol));
      out.rows.push_back(row);
    }
    break;
  }
  case RunMode::Conduct:
  {
    for (double E : config_energy_grid(cfg))
    {
      ScatterRow row;
      row.E = E;
      row.G = conductance(g, d, E);
      row.has_G = true;
      out.rows.push_back(row);
      ++out.evaluations;
    }
    break;
  }
  case RunMode::IntegratedConductance:
  {
    const std::vector<double> ws =
        expand_triplet(cfg.sweep.start, cfg.sweep.step, cfg.sweep.stop);
    out.conductance = integrated_conductance(g, d, ws, cfg.bands);
    out.factorizations = out.conductance.factorizations;
    out.evaluations = out.conductance.evaluations;
    break;
  }
  }
  return out;
}

std::vector<std::string> emit_results(const RunOutput& out, const RunConfig& cfg,
                                      const std::string& out_dir)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

  std::vector<std::string> files;
  auto put = [&](const std::string& name, const std::string& content) {
    write_file(fs::path(out_dir) / name, content);
    files.push_back(name);
  };

  switch (cfg.mode)
  {
  case RunMode::SchematicSweep:
  case RunMode::BilliardSweep:
    if (cfg.csv)
    {
      put("states.csv", states_csv(out.sweep, cfg.mode == RunMode::SchematicSweep));
      put("diagnostics.csv", diagnostics_csv(out.sweep));
      put("crossings.csv", crossings_csv(out.crossings));
      if (cfg.mode == RunMode::BilliardSweep && cfg.sweep.mixing)
        put("mixing.csv", mixing_csv(out.sweep));
    }
    if (cfg.svg)
      put("trajectories.svg", trajectories_svg(out.sweep));
    break;
  case RunMode::Poles:
    if (cfg.csv)
    {
      put("poles.csv", poles_csv(out));
      put("mixing.csv", pole_mixing_csv(out));
    }
    if (cfg.svg)
      put("poles.svg", poles_svg(out));
    if (cfg.field)
    {
      for (std::size_t k = 0; k < out.poles.set.size(); ++k)
      {
        char name[32];
        std::snprintf(name, sizeof name, "field_%03zu.field", k);
        export_field(out.poles.layout, out.poles.set[k].vector,
                     (fs::path(out_dir) / name).string());
        files.push_back(name);
      }
    }
    break;
  case RunMode::Scatter:
    if (cfg.csv)
      put("scatter.csv", scatter_csv(out));
    if (cfg.svg)
      put("scatter.svg", scatter_svg(out));
    if (cfg.field)
    {
      for (std::size_t k = 0; k < out.scatter_solutions.size(); ++k)
      {
        char name[32];
        std::snprintf(name, sizeof name, "field_%03zu.field", k);
        export_field(out.scatter_solutions[k].layout, out.scatter_solutions[k].field,
                     (fs::path(out_dir) / name).string());
        files.push_back(name);
      }
    }
    break;
  case RunMode::Conduct:
    if (cfg.csv)
      put("conductance.csv", conductance_csv(out));
    if (cfg.svg)
      put("conductance.svg", conductance_svg(out));
    break;
  case RunMode::IntegratedConductance:
    if (cfg.csv)
      put("integrated.csv", integrated_csv(out.conductance));
    if (cfg.svg)
      put("integrated.svg", integrated_svg(out.conductance));
    break;
  }

  if (cfg.json)
  {
    files.push_back("manifest.json");
    write_file(fs::path(out_dir) / "manifest.json", manifest_json(out, cfg, files));
  }
  return files;
}

} // namespace reslab
