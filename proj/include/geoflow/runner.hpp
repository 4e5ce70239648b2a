#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geoflow/config.hpp"
#include "geoflow/flow.hpp"
#include "geoflow/track.hpp"

namespace geoflow {

/// Initial flow state described by the config's initial-data section.
FlowState initial_state(const ExperimentConfig& config);

/// Boundary data for graph mode (the exact translating solution); empty otherwise.
RunHooks run_hooks(const ExperimentConfig& config);

struct Analysis {
  std::string csv;          // one row per snapshot, header first
  std::string report_json;  // summary of every requested diagnostic
};

/// Snapshot diagnostics for a track. `stop_reason`, when given, fills the
/// stop_reason column on the final row and is copied into the report.
Analysis analyze_track(const SpaceTimeTrack& track, const DiagnosticsConfig& diag,
                       const std::optional<std::string>& stop_reason = std::nullopt);

struct RunOutcome {
  FlowResult flow;
  Analysis analysis;
  int exit_code = 0;  // 0 normal stop, 2 when a step failed
};

/// Runs the flow, then atomically writes the track, the CSV and (when
/// output.report is set) the JSON report. The track is written even after a
/// step failure.
RunOutcome run_experiment(const ExperimentConfig& config);

/// "%.17g"; NaN and infinities print as nan / inf / -inf.
std::string format_number(double v);

}  // namespace geoflow
