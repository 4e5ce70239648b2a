#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "geoflow/geometry.hpp"
#include "geoflow/immersion.hpp"
#include "geoflow/torus_map.hpp"
#include "geoflow/track.hpp"

namespace geoflow {

enum class FlowMode { parametric, graph, map_graph };

/// One time slice of a flow. In graph mode the immersion is the graph
/// (x, f(x)) and its last coordinate is the height; in map-graph mode it is
/// the graph of a torus map in R^4.
struct FlowState {
  FlowMode mode = FlowMode::parametric;
  Immersion imm;
  double time = 0.0;
  long step = 0;
  double last_dt = 0.0;
};

struct SolverConfig {
  double cfl = 0.2;
  double dt_min = 1e-14;
  double dt_max = 1e-2;
  long max_steps = 50'000'000;
  double horizon = 1.0;
  double ii2_ceiling = 1e6;
  /// Stop when the volume drops below this fraction of the initial volume.
  double volume_floor = 1e-8;
  /// Stop when the integral of |H|^2 drops below this value (0 disables).
  double energy_floor = 0.0;
  /// Snapshot spacing in time (0 records only the initial and final states).
  double cadence = 0.01;
  std::vector<double> extra_snapshot_times;
  GeometryOptions geometry;

  /// Throws ArgumentError when the ranges are inconsistent.
  void validate() const;
};

/// Dirichlet data for graph mode: boundary height at (x0, x1) and time t.
using BoundaryData = std::function<double(double x0, double x1, double t)>;

enum class StopReason { horizon, singularity, volume_floor, converged, step_failure, max_steps };

const char* to_string(StopReason r);

/// Per accepted step diagnostics, evaluated on the state at the start of the step
/// (the final record is the final state).
struct StepRecord {
  long step = 0;
  double time = 0.0;
  double dt = 0.0;
  double volume = 0.0;
  double int_H2 = 0.0;
  double sup_II2 = 0.0;
  double sup_H2 = 0.0;
};

using StepObserver = std::function<void(const FlowState&, const GeometryFields&)>;

struct RunHooks {
  BoundaryData boundary;
  StepObserver observer;
};

struct FlowResult {
  SpaceTimeTrack track;
  std::vector<StepRecord> steps;
  StopReason reason = StopReason::horizon;
  std::string message;
  FlowState final_state;
};

/// One explicit RK4 step of dF/dt = H. Throws DegenerateMetricError or StepRejectedError.
FlowState mcf_step_parametric(const FlowState& state, double dt, const GeometryOptions& opts = {});

/// One explicit RK4 step of f_t = sqrt(1 + |grad f|^2) div(grad f / sqrt(1 + |grad f|^2)).
/// Dirichlet nodes take boundary(x, t_stage) at every stage and boundary(x, t + dt) at the end.
std::vector<double> graph_mcf_step(const ParamGrid& grid, std::span<const double> f, double t,
                                   double dt, const BoundaryData& boundary,
                                   const GeometryOptions& opts = {});

/// One RK4 step of the graph of a torus map moving with normal velocity H,
/// reparametrized over the first factor. Throws GraphConditionError.
TorusMap map_graph_mcf_step(const TorusMap& map, double dt, const GeometryOptions& opts = {});

/// sigma * h_eff^2 / (2n (1 + sup|II|^2 h_eff^2)) clamped to [dt_min, dt_max], where
/// h_eff^2 = min over points and axes of h_i^2 / g^ii.
double adaptive_dt(const GeometryFields& geom, const ParamGrid& grid, const SolverConfig& config);

/// Flows until a stop condition fires. Step errors end the run with
/// StopReason::step_failure; they are never rethrown.
FlowResult run_flow(const FlowState& initial, const SolverConfig& config, const RunHooks& hooks = {});

/// Graph immersion (x, f(x)) (n = 1) or (x, y, f(x, y)) (n = 2) of a height field.
Immersion graph_immersion(const ParamGrid& grid, std::span<const double> height);

}  // namespace geoflow
