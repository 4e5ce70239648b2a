#include "geoflow/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geoflow/config.hpp"
#include "geoflow/errors.hpp"
#include "geoflow/parallel.hpp"
#include "geoflow/runner.hpp"
#include "geoflow/singularity.hpp"
#include "geoflow/track_io.hpp"

namespace geoflow::cli {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;
constexpr int kCorrupt = 3;

bool quiet = false;

int fail(int code, const std::string& msg) {
  std::cerr << "geoflow: " << msg << "\n";
  return code;
}

int cmd_run(const std::string& config_path) {
  const ExperimentConfig cfg = parse_experiment(ConfigFile::load(config_path));
  const RunOutcome out = run_experiment(cfg);
  if (!quiet) std::cout << "stop: " << to_string(out.flow.reason) << " at t = "
            << format_number(out.flow.final_state.time) << " after "
            << out.flow.final_state.step << " steps\n";
  if (!out.flow.message.empty()) std::cerr << "geoflow: " << out.flow.message << "\n";
  return out.exit_code;
}

int cmd_analyze(const std::string& track_path, const std::string& config_path) {
  DiagnosticsConfig diag = parse_diagnostics(ConfigFile::load(config_path));
  const SpaceTimeTrack track = read_track(track_path);
  if (diag.csv.empty()) diag.csv = track_path + ".analysis.csv";
  if (diag.report.empty()) diag.report = track_path + ".analysis.json";
  const Analysis a = analyze_track(track, diag);
  write_file_atomic(diag.csv, a.csv);
  write_file_atomic(diag.report, a.report_json);
  if (!quiet) std::cout << "wrote " << diag.csv.string() << " and " << diag.report.string() << "\n";
  return kOk;
}

int cmd_rescale(const std::string& track_path, const std::vector<double>& y0, double t0,
                double lambda, std::string out_path) {
  const SpaceTimeTrack track = read_track(track_path);
  if (out_path.empty()) out_path = track_path + ".rescaled.mcft";
  write_track(out_path, parabolic_dilate(track, DensityProbe{y0, t0}, lambda));
  if (!quiet) std::cout << "wrote " << out_path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap_from_env();

  CLI::App app{"Mean curvature flow experiments on periodic grids"};
  app.require_subcommand(1);
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run a flow from a config file");
  run->add_option("config", run_config, "Experiment config")->required();

  std::string an_track, an_config;
  auto* analyze = app.add_subcommand("analyze", "Run diagnostics on a track file");
  analyze->add_option("track", an_track, "Track file")->required();
  analyze->add_option("config", an_config, "Diagnostics config")->required();

  std::string rs_track, rs_out;
  std::vector<double> rs_y0;
  double rs_t0 = 0.0;
  double rs_lambda = 1.0;
  auto* rescale = app.add_subcommand("rescale", "Parabolically dilate a track file");
  rescale->add_option("track", rs_track, "Track file")->required();
  rescale->add_option("--y0", rs_y0, "Dilation center in space")->expected(1, -1);
  rescale->add_option("--t0", rs_t0, "Dilation center in time");
  rescale->add_option("--lambda", rs_lambda, "Scale factor (> 0)")->required();
  rescale->add_option("--out", rs_out, "Output track (default <track>.rescaled.mcft)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(run_config);
    if (*analyze) return cmd_analyze(an_track, an_config);
    if (*rescale) return cmd_rescale(rs_track, rs_y0, rs_t0, rs_lambda, rs_out);
  } catch (const ConfigError& e) {
    return fail(kUsage, std::string("config error: ") + e.what());
  } catch (const CorruptTrackError& e) {
    return fail(kCorrupt, std::string("corrupt track: ") + e.what());
  } catch (const ArgumentError& e) {
    return fail(kUsage, std::string("argument error: ") + e.what());
  } catch (const Error& e) {
    return fail(kRuntime, e.what());
  } catch (const std::exception& e) {
    return fail(kRuntime, e.what());
  }
  return kUsage;
}

}  // namespace geoflow::cli
