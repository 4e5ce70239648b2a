#include "geoflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "key '" + key + "': '" + s + "' is not a number");
  }
  return v;
}

long to_long(const std::string& key, const std::string& s) {
  long v = 0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "key '" + key + "': '" + s + "' is not an integer");
  }
  return v;
}

// Whitespace- or comma-separated numbers.
std::vector<double> number_list(const std::string& key, const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(key, tok));
  return out;
}

StencilOrder parse_order(const std::string& key, long v) {
  if (v == 2) return StencilOrder::second;
  if (v == 4) return StencilOrder::fourth;
  throw ConfigError(key, "key '" + key + "': stencil order must be 2 or 4");
}

const std::set<std::string> kDiagnosticKeys = {
    "seed",
    "diagnostics.probes",
    "diagnostics.type1",
    "diagnostics.symplectic",
    "diagnostics.dilations",
    "diagnostics.density_slack",
    "diagnostics.stencil_order",
    "output.csv",
    "output.report",
};

const std::set<std::string> kExperimentKeys = [] {
  std::set<std::string> k = kDiagnosticKeys;
  k.insert({"mode", "initial.shape", "initial.radius", "initial.ambient_dim", "initial.a",
            "initial.b", "initial.r1", "initial.r2", "initial.width", "initial.interval",
            "initial.shears", "initial.period", "initial.samples", "grid.dims", "solver.cfl",
            "solver.dt_min", "solver.dt_max", "solver.max_steps", "solver.horizon",
            "solver.ii2_ceiling", "solver.volume_floor", "solver.energy_floor", "solver.cadence",
            "solver.snapshot_times", "solver.stencil_order", "output.track"});
  return k;
}();

DiagnosticsConfig diagnostics_from(const ConfigFile& f) {
  DiagnosticsConfig d;
  if (f.has("diagnostics.probes")) {
    try {
      d.probes = parse_probes(f.raw("diagnostics.probes"));
    } catch (const ArgumentError& e) {
      throw ConfigError("diagnostics.probes", std::string("key 'diagnostics.probes': ") + e.what());
    }
  }
  d.type1 = f.get_bool("diagnostics.type1", false);
  d.symplectic = f.get_bool("diagnostics.symplectic", false);
  d.dilations = f.get_doubles("diagnostics.dilations");
  d.density_slack = f.get_double("diagnostics.density_slack", 1e-6);
  if (f.has("diagnostics.stencil_order")) {
    d.order = parse_order("diagnostics.stencil_order", f.get_long("diagnostics.stencil_order", 2));
  }
  const long seed = f.get_long("seed", 42);
  if (seed < 0) throw ConfigError("seed", "key 'seed' must be nonnegative");
  d.seed = static_cast<std::uint64_t>(seed);
  d.csv = f.get("output.csv", "");
  d.report = f.get("output.report", "");
  return d;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    if (!cfg.values_.emplace(key, value).second) {
      throw ConfigError(key, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::string& ConfigFile::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "missing key '" + key + "'");
  return it->second;
}

std::string ConfigFile::get(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, raw(key)) : fallback;
}

long ConfigFile::get_long(const std::string& key, long fallback) const {
  return has(key) ? to_long(key, raw(key)) : fallback;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> ConfigFile::get_doubles(const std::string& key) const {
  return has(key) ? number_list(key, raw(key)) : std::vector<double>{};
}

void ConfigFile::require_known(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.count(key)) throw ConfigError(key, "unknown key '" + key + "'");
  }
}

FlowMode parse_mode(const std::string& s) {
  if (s == "parametric") return FlowMode::parametric;
  if (s == "graph") return FlowMode::graph;
  if (s == "map-graph" || s == "map_graph") return FlowMode::map_graph;
  throw ConfigError("mode", "key 'mode': unknown flow mode '" + s + "'");
}

const char* to_string(FlowMode m) {
  switch (m) {
    case FlowMode::parametric: return "parametric";
    case FlowMode::graph: return "graph";
    case FlowMode::map_graph: return "map-graph";
  }
  return "unknown";
}

std::vector<Shear> parse_shears(const std::string& s) {
  std::vector<Shear> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 3) {
      throw ConfigError("initial.shears", "key 'initial.shears': expected axis:amplitude:frequency");
    }
    Shear sh;
    sh.axis = static_cast<int>(to_long("initial.shears", parts[0]));
    sh.amplitude = to_double("initial.shears", parts[1]);
    sh.frequency = to_double("initial.shears", parts[2]);
    if (sh.axis != 0 && sh.axis != 1) throw ConfigError("initial.shears", "key 'initial.shears': axis must be 0 or 1");
    out.push_back(sh);
  }
  return out;
}

std::vector<ProbeSpec> parse_probes(const std::string& s) {
  std::vector<ProbeSpec> out;
  for (const auto& item : split(s, ';')) {
    if (item.empty()) continue;
    const auto at = item.find('@');
    if (at == std::string::npos) throw ArgumentError("probe '" + item + "' lacks '@ t0'");
    ProbeSpec p;
    p.y0 = number_list("diagnostics.probes", item.substr(0, at));
    const std::string t0 = trim(item.substr(at + 1));
    if (t0 != "auto") p.t0 = to_double("diagnostics.probes", t0);
    out.push_back(p);
  }
  return out;
}

DiagnosticsConfig parse_diagnostics(const ConfigFile& file) {
  file.require_known(kDiagnosticKeys);
  return diagnostics_from(file);
}

ExperimentConfig parse_experiment(const ConfigFile& f) {
  f.require_known(kExperimentKeys);
  ExperimentConfig c;
  c.mode = parse_mode(f.get("mode", "parametric"));

  InitialData& in = c.initial;
  in.shape = f.get("initial.shape", c.mode == FlowMode::graph       ? "grim_reaper"
                                    : c.mode == FlowMode::map_graph ? "shears"
                                                                    : "circle");
  in.radius = f.get_double("initial.radius", 1.0);
  in.ambient_dim = static_cast<int>(f.get_long("initial.ambient_dim", 2));
  in.a = f.get_double("initial.a", 1.0);
  in.b = f.get_double("initial.b", 1.0);
  in.r1 = f.get_double("initial.r1", 1.0);
  in.r2 = f.get_double("initial.r2", 2.0);
  in.width = f.get_double("initial.width", 2.0);
  if (f.has("initial.interval")) {
    in.interval = f.get_doubles("initial.interval");
    if (in.interval.size() != 2) throw ConfigError("initial.interval", "key 'initial.interval' needs two numbers");
  }
  in.shears = parse_shears(f.get("initial.shears", ""));
  in.period = f.get_double("initial.period", 1.0);
  in.samples = f.get("initial.samples", "");

  if (f.has("grid.dims")) {
    c.dims.clear();
    for (double d : f.get_doubles("grid.dims")) {
      if (d != static_cast<int>(d) || d < 1) throw ConfigError("grid.dims", "key 'grid.dims' must hold positive integers");
      c.dims.push_back(static_cast<int>(d));
    }
    if (c.dims.empty() || c.dims.size() > 2) throw ConfigError("grid.dims", "key 'grid.dims' needs one or two sizes");
  }

  SolverConfig& s = c.solver;
  s.cfl = f.get_double("solver.cfl", s.cfl);
  s.dt_min = f.get_double("solver.dt_min", s.dt_min);
  s.dt_max = f.get_double("solver.dt_max", s.dt_max);
  s.max_steps = f.get_long("solver.max_steps", s.max_steps);
  s.horizon = f.get_double("solver.horizon", s.horizon);
  s.ii2_ceiling = f.get_double("solver.ii2_ceiling", s.ii2_ceiling);
  s.volume_floor = f.get_double("solver.volume_floor", s.volume_floor);
  s.energy_floor = f.get_double("solver.energy_floor", s.energy_floor);
  s.cadence = f.get_double("solver.cadence", s.cadence);
  s.extra_snapshot_times = f.get_doubles("solver.snapshot_times");
  s.geometry.order = parse_order("solver.stencil_order", f.get_long("solver.stencil_order", 2));
  try {
    s.validate();
  } catch (const ArgumentError& e) {
    const std::string msg = e.what();
    const auto b = msg.find("solver.");
    const std::string key = b == std::string::npos ? "solver" : msg.substr(b, msg.find(' ', b) - b);
    throw ConfigError(key, msg);
  }

  c.diagnostics = diagnostics_from(f);
  c.track_path = f.get("output.track", "track.mcft");
  c.csv_path = f.get("output.csv", "diagnostics.csv");
  return c;
}

}  // namespace geoflow
