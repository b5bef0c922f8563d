// SPDX-License-Identifier: Apache-2.0
#include "reslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "reslab/billiard.hpp"
#include "reslab/geometry.hpp"
#include "reslab/two_level.hpp"

namespace reslab
{

const char* to_string(RunMode m)
{
  switch (m)
  {
  case RunMode::SchematicSweep: return "schematic-sweep";
  case RunMode::Poles: return "poles";
  case RunMode::Scatter: return "scatter";
  case RunMode::Conduct: return "conduct";
  case RunMode::BilliardSweep: return "billiard-sweep";
  case RunMode::IntegratedConductance: return "integrated-conductance";
  }
  return "?";
}

namespace
{

std::string trim(const std::string& s)
{
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : s)
  {
    if (c == sep)
    {
      out.push_back(trim(cur));
      cur.clear();
    }
    else
      cur.push_back(c);
  }
  out.push_back(trim(cur));
  return out;
}

double to_number(const std::string& s, int line)
{
  if (s.empty())
    throw ParseError(line, "empty numeric value");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ParseError(line, "'" + s + "' is not a number");
  return v;
}

struct RawValue
{
  std::string text;
  int line = 0;
  bool used = false;
};

// Line-oriented `key = value` scanner with `#` comments.
std::map<std::string, RawValue> tokenize(const std::string& text)
{
  std::map<std::string, RawValue> raw;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line))
  {
    ++number;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(number, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError(number, "missing key before '='");
    for (char c : key)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw ParseError(number, "malformed key '" + key + "'");
    if (value.empty())
      throw ParseError(number, "missing value for key '" + key + "'");
    if (raw.count(key))
      throw ParseError(number, "duplicate key '" + key + "'");
    raw.emplace(key, RawValue{value, number, false});
  }
  return raw;
}

// Typed access over the raw key/value map; every read marks the key used so
// leftovers can be reported as unknown keys for the mode.
class Reader
{
public:
  explicit Reader(std::map<std::string, RawValue> raw) : raw_(std::move(raw)) {}

  bool has(const std::string& key) const { return raw_.count(key) != 0; }

  const RawValue* take(const std::string& key)
  {
    auto it = raw_.find(key);
    if (it == raw_.end())
      return nullptr;
    it->second.used = true;
    return &it->second;
  }

  double number(const std::string& key, double fallback)
  {
    const RawValue* v = take(key);
    if (!v)
      return fallback;
    const auto parts = split(v->text, ':');
    if (parts.size() != 1)
      throw ParseError(v->line, "key '" + key + "' takes a single value");
    return to_number(parts[0], v->line);
  }

  int integer(const std::string& key, int fallback)
  {
    const RawValue* v = take(key);
    if (!v)
      return fallback;
    char* end = nullptr;
    const long n = std::strtol(v->text.c_str(), &end, 10);
    if (end != v->text.c_str() + v->text.size())
      throw ParseError(v->line, "'" + v->text + "' is not an integer");
    return static_cast<int>(n);
  }

  bool boolean(const std::string& key, bool fallback)
  {
    const RawValue* v = take(key);
    if (!v)
      return fallback;
    if (v->text == "true")
      return true;
    if (v->text == "false")
      return false;
    throw ParseError(v->line, "key '" + key + "' expects true or false");
  }

  // Scalar or sweep triplet `start : step : stop`. The step sign is
  // normalized toward the stop value, matching the caption-style notation
  // `0.4 : 0.01 : 0` for a descending sweep.
  struct NumberOrTriplet
  {
    bool is_triplet = false;
    double scalar = 0.0;
    double start = 0.0, step = 0.0, stop = 0.0;
    int line = 0;
  };

  NumberOrTriplet number_or_triplet(const std::string& key, double fallback)
  {
    NumberOrTriplet out;
    const RawValue* v = take(key);
    if (!v)
    {
      out.scalar = fallback;
      return out;
    }
    out.line = v->line;
    const auto parts = split(v->text, ':');
    if (parts.size() == 1)
    {
      out.scalar = to_number(parts[0], v->line);
      return out;
    }
    if (parts.size() != 3)
      throw ParseError(v->line, "key '" + key + "' expects a value or 'start : step : stop'");
    out.is_triplet = true;
    out.start = to_number(parts[0], v->line);
    out.step = to_number(parts[1], v->line);
    out.stop = to_number(parts[2], v->line);
    if (out.step == 0.0)
      throw ValidationError(key, "sweep step must be nonzero");
    out.step = std::copysign(out.step, out.stop - out.start);
    return out;
  }

  std::pair<double, double> band(const std::string& key)
  {
    const RawValue* v = take(key);
    if (!v)
      throw ValidationError(key, "required for this mode");
    const auto parts = split(v->text, ':');
    if (parts.size() != 2)
      throw ParseError(v->line, "key '" + key + "' expects 'lo : hi'");
    return {to_number(parts[0], v->line), to_number(parts[1], v->line)};
  }

  void finish(RunMode mode) const
  {
    for (const auto& [key, v] : raw_)
      if (!v.used)
        throw ParseError(v.line, "unknown key '" + key + "' for mode " +
                                     std::string(to_string(mode)));
  }

private:
  std::map<std::string, RawValue> raw_;
};

void check_sweep_grid(const std::string& key, double start, double step, double stop)
{
  const double ratio = (stop - start) / step;
  if (!(ratio > 1.0))
    throw ValidationError(key, "sweep must cover more than one step");
}

void check_window(double lo, double hi)
{
  if (!(lo < hi))
    throw ValidationError("E_lo", "window requires E_lo < E_hi");
  if (lo < kThreshold1 - 1e-9 || hi > kThreshold2 + 1e-9)
    throw ValidationError("E_lo", "window must lie inside the one-mode interval");
}

void parse_outputs(Reader& r, RunConfig& cfg)
{
  const RawValue* v = r.take("outputs");
  if (!v)
    return;
  cfg.csv = cfg.json = cfg.svg = cfg.field = false;
  for (const std::string& f : split(v->text, ','))
  {
    if (f == "csv")
      cfg.csv = true;
    else if (f == "json")
      cfg.json = true;
    else if (f == "svg")
      cfg.svg = true;
    else if (f == "field")
      cfg.field = true;
    else
      throw ValidationError("outputs", "unknown format '" + f + "'");
  }
  if (!cfg.csv && !cfg.json && !cfg.svg && !cfg.field)
    throw ValidationError("outputs", "at least one output format required");
}

void parse_crossing_options(Reader& r, RunConfig& cfg)
{
  cfg.crossings.g_max = r.number("crossing_g_max", cfg.crossings.g_max);
  cfg.crossings.window = r.integer("crossing_window", cfg.crossings.window);
  cfg.crossings.ratio = r.number("crossing_ratio", cfg.crossings.ratio);
  if (cfg.crossings.window < 1)
    throw ValidationError("crossing_window", "must be at least 1");
  if (!(cfg.crossings.ratio > 0.0))
    throw ValidationError("crossing_ratio", "must be positive");
}

void parse_schematic(Reader& r, RunConfig& cfg)
{
  TwoLevelParams& p = cfg.sweep.two_level;
  p.E1 = r.number("E1", p.E1);
  p.E2 = r.number("E2", p.E2);
  p.Gamma1 = r.number("Gamma1", p.Gamma1);
  p.Gamma2 = r.number("Gamma2", p.Gamma2);

  const auto v_in = r.number_or_triplet("v_in", p.v_in);
  const auto w_ex = r.number_or_triplet("w_ex", p.w_ex);
  if (v_in.is_triplet && w_ex.is_triplet)
    throw ValidationError("w_ex", "only one parameter may carry a sweep triplet");
  if (!v_in.is_triplet && !w_ex.is_triplet)
    throw ValidationError("v_in", "one of v_in / w_ex must be a sweep triplet");
  const auto& swept = v_in.is_triplet ? v_in : w_ex;
  cfg.sweep.parameter = v_in.is_triplet ? SweepParameter::v_in : SweepParameter::w_ex;
  cfg.sweep.start = swept.start;
  cfg.sweep.step = swept.step;
  cfg.sweep.stop = swept.stop;
  if (v_in.is_triplet)
    p.w_ex = w_ex.scalar;
  else
    p.v_in = v_in.scalar;
  check_sweep_grid(to_string(cfg.sweep.parameter), swept.start, swept.step, swept.stop);

  cfg.sweep.match_gate = r.number("match_gate", cfg.sweep.match_gate);
  parse_crossing_options(r, cfg);

  // probe the model invariants at both sweep endpoints
  for (double value : {cfg.sweep.start, cfg.sweep.stop})
  {
    TwoLevelParams probe = p;
    (cfg.sweep.parameter == SweepParameter::v_in ? probe.v_in : probe.w_ex) = value;
    build_two_level(probe);
  }
}

// Geometry and discretization keys shared by every billiard mode. The keys
// listed in `sweepable` may carry a triplet; exactly `need_triplet` of them
// must. Returns the swept-parameter choice when a triplet was given.
void parse_billiard(Reader& r, RunConfig& cfg, bool sweep_mode, bool lead2_default)
{
  BilliardGeometry& g = cfg.sweep.geometry;
  const auto y_d = r.number_or_triplet("y_d", g.y_d);
  const auto x_r = r.number_or_triplet("x_r", g.x_r);
  const auto slide = r.number_or_triplet("slide_w", g.slide_w);
  const int triplets = (y_d.is_triplet ? 1 : 0) + (x_r.is_triplet ? 1 : 0) +
                       (slide.is_triplet ? 1 : 0);
  if (!sweep_mode && triplets > 0)
    throw ValidationError("mode", "sweep triplets are only valid in sweep modes");
  if (sweep_mode && triplets != 1)
    throw ValidationError("slide_w", "exactly one of y_d / x_r / slide_w must be a "
                                     "sweep triplet");
  g.y_d = y_d.is_triplet ? y_d.start : y_d.scalar;
  g.x_r = x_r.is_triplet ? x_r.start : x_r.scalar;
  g.slide_w = slide.is_triplet ? slide.start : slide.scalar;
  if (sweep_mode)
  {
    const auto& swept = y_d.is_triplet ? y_d : (x_r.is_triplet ? x_r : slide);
    cfg.sweep.parameter = y_d.is_triplet
                              ? SweepParameter::y_d
                              : (x_r.is_triplet ? SweepParameter::x_r : SweepParameter::slide_w);
    cfg.sweep.start = swept.start;
    cfg.sweep.step = swept.step;
    cfg.sweep.stop = swept.stop;
    check_sweep_grid(to_string(cfg.sweep.parameter), swept.start, swept.step, swept.stop);
  }

  g.scatterer_enabled = r.boolean("scatterer", g.scatterer_enabled);
  g.scatterer_x = r.number("scatterer_x", g.scatterer_x);
  g.scatterer_y = r.number("scatterer_y", g.scatterer_y);
  g.scatterer_radius = r.number("scatterer_radius", g.scatterer_radius);
  g.lead2_enabled = r.boolean("lead2", lead2_default);

  DiscretizationParams& d = cfg.sweep.disc;
  d.h = r.number("h", d.h);
  d.ecs_theta = r.number("ecs_theta", d.ecs_theta);
  d.ecs_start = r.number("ecs_start", d.ecs_start);
  d.lead_length = r.number("lead_length", d.lead_length);
  d.n_modes = r.integer("n_modes", d.n_modes);
  validate_discretization(d);

  // every swept geometry must satisfy the billiard invariants up front
  if (sweep_mode)
  {
    SweepSpec probe = cfg.sweep;
    const int n = static_cast<int>(
                      std::floor((probe.stop - probe.start) / probe.step + 1e-9)) +
                  1;
    for (int t = 0; t < n; ++t)
    {
      BilliardGeometry gt = g;
      const double value = probe.start + t * probe.step;
      switch (cfg.sweep.parameter)
      {
      case SweepParameter::y_d: gt.y_d = value; break;
      case SweepParameter::x_r: gt.x_r = value; break;
      default: gt.slide_w = value; break;
      }
      validate_geometry(gt);
      make_grid(gt, d, true); // checks grid alignment of all edges
    }
  }
  else
  {
    validate_geometry(g);
    make_grid(g, d, true);
  }
}

void parse_energy_grid(Reader& r, RunConfig& cfg)
{
  const auto e = r.number_or_triplet("E", 0.0);
  if (!r.has("E") && e.scalar == 0.0)
    throw ValidationError("E", "required for this mode");
  if (e.is_triplet)
  {
    cfg.e_single = false;
    cfg.e_start = e.start;
    cfg.e_step = e.step;
    cfg.e_stop = e.stop;
    if (!(e.step > 0.0 && e.stop > e.start))
      throw ValidationError("E", "energy grid must ascend");
  }
  else
  {
    cfg.e_single = true;
    cfg.e_start = cfg.e_stop = e.scalar;
    cfg.e_step = 0.0;
  }
  for (double v : {cfg.e_start, cfg.e_stop})
    if (v < kThreshold1 + 1e-9 || v > kThreshold2 - 1e-9)
      throw ValidationError("E", "energies must lie strictly inside the one-mode "
                                 "interval");
}

} // namespace

RunConfig parse_config(const std::string& text)
{
  auto raw = tokenize(text);
  const auto mode_it = raw.find("mode");
  if (mode_it == raw.end())
    throw ValidationError("mode", "required");
  mode_it->second.used = true;
  const std::string mode_name = mode_it->second.text;

  RunConfig cfg;
  bool known = false;
  for (RunMode m : {RunMode::SchematicSweep, RunMode::Poles, RunMode::Scatter,
                    RunMode::Conduct, RunMode::BilliardSweep, RunMode::IntegratedConductance})
    if (mode_name == to_string(m))
    {
      cfg.mode = m;
      known = true;
    }
  if (!known)
    throw ValidationError("mode", "unknown mode '" + mode_name + "'");

  Reader r(std::move(raw));
  r.take("mode");
  parse_outputs(r, cfg);
  if (cfg.field && cfg.mode != RunMode::Poles && cfg.mode != RunMode::Scatter)
    throw ValidationError("outputs", "field output needs a billiard field source "
                                     "(poles or scatter mode)");

  switch (cfg.mode)
  {
  case RunMode::SchematicSweep:
    parse_schematic(r, cfg);
    break;
  case RunMode::Poles:
    parse_billiard(r, cfg, false, false);
    cfg.sweep.e_lo = r.number("E_lo", cfg.sweep.e_lo);
    cfg.sweep.e_hi = r.number("E_hi", cfg.sweep.e_hi);
    check_window(cfg.sweep.e_lo, cfg.sweep.e_hi);
    break;
  case RunMode::Scatter:
    parse_billiard(r, cfg, false, false);
    parse_energy_grid(r, cfg);
    break;
  case RunMode::Conduct:
    parse_billiard(r, cfg, false, true);
    parse_energy_grid(r, cfg);
    if (!cfg.sweep.geometry.lead2_enabled)
      throw ValidationError("lead2", "the conductance modes need the second lead");
    break;
  case RunMode::BilliardSweep:
    parse_billiard(r, cfg, true, false);
    cfg.sweep.e_lo = r.number("E_lo", cfg.sweep.e_lo);
    cfg.sweep.e_hi = r.number("E_hi", cfg.sweep.e_hi);
    check_window(cfg.sweep.e_lo, cfg.sweep.e_hi);
    cfg.sweep.match_gate = r.number("match_gate", cfg.sweep.match_gate);
    cfg.sweep.mixing = r.boolean("mixing", cfg.sweep.mixing);
    parse_crossing_options(r, cfg);
    break;
  case RunMode::IntegratedConductance:
    parse_billiard(r, cfg, true, true);
    if (cfg.sweep.parameter != SweepParameter::slide_w)
      throw ValidationError("slide_w", "integrated conductance sweeps slide_w");
    if (!cfg.sweep.geometry.lead2_enabled)
      throw ValidationError("lead2", "the conductance modes need the second lead");
    cfg.bands.push_back(r.band("band1"));
    if (r.has("band2"))
      cfg.bands.push_back(r.band("band2"));
    for (const auto& [lo, hi] : cfg.bands)
    {
      if (!(lo < hi))
        throw ValidationError("band1", "band requires lo < hi");
      if (lo < kThreshold1 - 1e-9 || hi > kThreshold2 + 1e-9)
        throw ValidationError("band1", "band must lie inside the one-mode interval");
    }
    break;
  }

  r.finish(cfg.mode);
  return cfg;
}

namespace
{

std::string num(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string triplet(double start, double step, double stop)
{
  return num(start) + " : " + num(step) + " : " + num(stop);
}

void print_billiard(std::ostringstream& out, const RunConfig& cfg)
{
  const BilliardGeometry& g = cfg.sweep.geometry;
  const SweepParameter p = cfg.sweep.parameter;
  const bool sweep_mode =
      cfg.mode == RunMode::BilliardSweep || cfg.mode == RunMode::IntegratedConductance;
  auto geom_line = [&](const char* key, SweepParameter which, double scalar) {
    if (sweep_mode && p == which)
      out << key << " = " << triplet(cfg.sweep.start, cfg.sweep.step, cfg.sweep.stop)
          << "\n";
    else
      out << key << " = " << num(scalar) << "\n";
  };
  geom_line("y_d", SweepParameter::y_d, g.y_d);
  geom_line("x_r", SweepParameter::x_r, g.x_r);
  geom_line("slide_w", SweepParameter::slide_w, g.slide_w);
  out << "scatterer = " << (g.scatterer_enabled ? "true" : "false") << "\n";
  out << "scatterer_x = " << num(g.scatterer_x) << "\n";
  out << "scatterer_y = " << num(g.scatterer_y) << "\n";
  out << "scatterer_radius = " << num(g.scatterer_radius) << "\n";
  out << "lead2 = " << (g.lead2_enabled ? "true" : "false") << "\n";
  const DiscretizationParams& d = cfg.sweep.disc;
  out << "h = " << num(d.h) << "\n";
  out << "ecs_theta = " << num(d.ecs_theta) << "\n";
  out << "ecs_start = " << num(d.ecs_start) << "\n";
  out << "lead_length = " << num(d.lead_length) << "\n";
  out << "n_modes = " << d.n_modes << "\n";
}

void print_crossings(std::ostringstream& out, const RunConfig& cfg)
{
  out << "crossing_g_max = " << num(cfg.crossings.g_max) << "\n";
  out << "crossing_window = " << cfg.crossings.window << "\n";
  out << "crossing_ratio = " << num(cfg.crossings.ratio) << "\n";
}

} // namespace

std::string print_config(const RunConfig& cfg)
{
  std::ostringstream out;
  out << "mode = " << to_string(cfg.mode) << "\n";
  switch (cfg.mode)
  {
  case RunMode::SchematicSweep:
  {
    const TwoLevelParams& p = cfg.sweep.two_level;
    out << "E1 = " << num(p.E1) << "\n";
    out << "E2 = " << num(p.E2) << "\n";
    out << "Gamma1 = " << num(p.Gamma1) << "\n";
    out << "Gamma2 = " << num(p.Gamma2) << "\n";
    if (cfg.sweep.parameter == SweepParameter::v_in)
    {
      out << "v_in = " << triplet(cfg.sweep.start, cfg.sweep.step, cfg.sweep.stop) << "\n";
      out << "w_ex = " << num(p.w_ex) << "\n";
    }
    else
    {
      out << "v_in = " << num(p.v_in) << "\n";
      out << "w_ex = " << triplet(cfg.sweep.start, cfg.sweep.step, cfg.sweep.stop) << "\n";
    }
    out << "match_gate = " << num(cfg.sweep.match_gate) << "\n";
    print_crossings(out, cfg);
    break;
  }
  case RunMode::Poles:
    print_billiard(out, cfg);
    out << "E_lo = " << num(cfg.sweep.e_lo) << "\n";
    out << "E_hi = " << num(cfg.sweep.e_hi) << "\n";
    break;
  case RunMode::Scatter:
  case RunMode::Conduct:
    print_billiard(out, cfg);
    if (cfg.e_single)
      out << "E = " << num(cfg.e_start) << "\n";
    else
      out << "E = " << triplet(cfg.e_start, cfg.e_step, cfg.e_stop) << "\n";
    break;
  case RunMode::BilliardSweep:
    print_billiard(out, cfg);
    out << "E_lo = " << num(cfg.sweep.e_lo) << "\n";
    out << "E_hi = " << num(cfg.sweep.e_hi) << "\n";
    out << "match_gate = " << num(cfg.sweep.match_gate) << "\n";
    out << "mixing = " << (cfg.sweep.mixing ? "true" : "false") << "\n";
    print_crossings(out, cfg);
    break;
  case RunMode::IntegratedConductance:
    print_billiard(out, cfg);
    for (std::size_t b = 0; b < cfg.bands.size(); ++b)
      out << "band" << b + 1 << " = " << num(cfg.bands[b].first) << " : "
          << num(cfg.bands[b].second) << "\n";
    break;
  }
  out << "outputs = ";
  bool first = true;
  for (const auto& [on, name] : {std::pair<bool, const char*>{cfg.csv, "csv"},
                                 {cfg.json, "json"},
                                 {cfg.svg, "svg"},
                                 {cfg.field, "field"}})
    if (on)
    {
      if (!first)
        out << ",";
      out << name;
      first = false;
    }
  out << "\n";
  return out.str();
}

std::vector<double> config_energy_grid(const RunConfig& cfg)
{
  if (cfg.e_single)
    return {cfg.e_start};
  const int n =
      static_cast<int>(std::floor((cfg.e_stop - cfg.e_start) / cfg.e_step + 1e-9)) + 1;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t)
    v[static_cast<std::size_t>(t)] = cfg.e_start + t * cfg.e_step;
  return v;
}

} // namespace reslab
