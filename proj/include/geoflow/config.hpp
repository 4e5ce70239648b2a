#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geoflow/flow.hpp"
#include "geoflow/symplectic.hpp"

namespace geoflow {

/// Flat `key = value` file; `#` starts a comment, keys may be dotted.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;

  /// Throws ConfigError naming the first key outside `known`.
  void require_known(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Probe time t0 may be fixed or fitted from the track ("auto").
struct ProbeSpec {
  std::vector<double> y0;
  std::optional<double> t0;  // empty means "auto"
};

struct DiagnosticsConfig {
  std::vector<ProbeSpec> probes;
  bool type1 = false;
  bool symplectic = false;
  std::vector<double> dilations;     // self-shrinker residual after each dilation
  double density_slack = 1e-6;
  std::optional<StencilOrder> order;  // unset: the solver's order (second for analyze)
  std::uint64_t seed = 42;
  std::filesystem::path csv;
  std::filesystem::path report;
};

struct InitialData {
  std::string shape = "circle";
  double radius = 1.0;
  int ambient_dim = 2;
  double a = 1.0, b = 1.0;      // ellipse semi-axes
  double r1 = 1.0, r2 = 2.0;    // product torus radii
  double width = 2.0;           // plane
  std::vector<double> interval{-1.2, 1.2};
  std::vector<Shear> shears;
  double period = 1.0;          // map-graph torus period
  std::filesystem::path samples;
};

struct ExperimentConfig {
  FlowMode mode = FlowMode::parametric;
  InitialData initial;
  std::vector<int> dims{256};
  SolverConfig solver;
  DiagnosticsConfig diagnostics;
  std::filesystem::path track_path = "track.mcft";
  std::filesystem::path csv_path = "diagnostics.csv";
};

ExperimentConfig parse_experiment(const ConfigFile& file);
/// Only diagnostics.* and output.* keys are accepted.
DiagnosticsConfig parse_diagnostics(const ConfigFile& file);

FlowMode parse_mode(const std::string& s);
const char* to_string(FlowMode m);
/// "axis:amplitude:frequency" entries separated by commas.
std::vector<Shear> parse_shears(const std::string& s);
/// "y0 components @ t0" entries separated by semicolons; t0 may be "auto".
std::vector<ProbeSpec> parse_probes(const std::string& s);

}  // namespace geoflow
