#include "geoflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geoflow/errors.hpp"
#include "stencil.hpp"

namespace geoflow {

namespace {

constexpr double kGraphConditionThreshold = 1e-8;

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw StepRejectedError(std::string("non-finite value in ") + what);
  }
}

/// Velocity of the parametric flow (H) or of the map-graph flow (H minus the
/// tangential part that moves the first-factor coordinates).
std::vector<double> velocity(const Immersion& imm, FlowMode mode, const GeometryOptions& opts) {
  if (mode == FlowMode::parametric) return mean_curvature_field(imm, opts);

  if (imm.grid.n != 2) throw ArgumentError("map-graph flow needs a 2-d chart");
  std::vector<double> H;
  std::vector<double> T;
  detail::mean_curvature_kernel(imm, opts, H, &T);
  const int n = imm.grid.n;
  const auto N = static_cast<std::size_t>(imm.ambient_dim);
  const auto nz = static_cast<std::size_t>(n);
  std::vector<double> V(H.size(), 0.0);
  std::vector<double> projection(imm.num_points(), 0.0);
  for_each_index(opts.exec, imm.num_points(), [&](std::size_t p) {
    const double* h = H.data() + p * N;
    const double* t0 = T.data() + (p * nz) * N;
    const double* t1 = T.data() + (p * nz + 1) * N;
    double* v = V.data() + p * N;
    for (std::size_t c = nz; c < N; ++c) {
      v[c] = h[c] - h[0] * t0[c] - h[1] * t1[c];
    }
    // First-factor Jacobian determinant relative to the area element.
    const double j1 = t0[0] * t1[1] - t0[1] * t1[0];
    double g00 = 0.0, g01 = 0.0, g11 = 0.0;
    for (std::size_t c = 0; c < N; ++c) {
      g00 += t0[c] * t0[c];
      g01 += t0[c] * t1[c];
      g11 += t1[c] * t1[c];
    }
    projection[p] = j1 / std::sqrt(g00 * g11 - g01 * g01);
  });
  for (std::size_t p = 0; p < projection.size(); ++p) {
    if (!(projection[p] > kGraphConditionThreshold)) {
      throw GraphConditionError("graph condition lost at point " + std::to_string(p));
    }
  }
  return V;
}

Immersion advance(const Immersion& base, const std::vector<double>& rate, double scale) {
  Immersion out = base;
  for (std::size_t i = 0; i < out.positions.size(); ++i) out.positions[i] += scale * rate[i];
  return out;
}

Immersion rk4(const Immersion& imm, FlowMode mode, double dt, const GeometryOptions& opts) {
  const auto k1 = velocity(imm, mode, opts);
  require_finite(k1, "stage velocity");
  const auto k2 = velocity(advance(imm, k1, 0.5 * dt), mode, opts);
  require_finite(k2, "stage velocity");
  const auto k3 = velocity(advance(imm, k2, 0.5 * dt), mode, opts);
  require_finite(k3, "stage velocity");
  const auto k4 = velocity(advance(imm, k3, dt), mode, opts);
  require_finite(k4, "stage velocity");
  Immersion out = imm;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < out.positions.size(); ++i) {
    out.positions[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  require_finite(out.positions, "positions");
  return out;
}

/// Rate of the graph equation at interior nodes; zero at Dirichlet nodes.
std::vector<double> graph_rate(const detail::StencilTable& st, std::span<const double> f,
                               const GeometryOptions& opts) {
  const ParamGrid& grid = st.grid();
  const int n = grid.n;
  const detail::FieldView view{f.data(), 1, nullptr, nullptr};
  std::vector<double> rate(grid.size(), 0.0);
  for_each_index(opts.exec, grid.size(), [&](std::size_t p) {
    const int d1 = grid.dim(1);
    const int i0 = static_cast<int>(p / static_cast<std::size_t>(d1));
    const int i1 = static_cast<int>(p % static_cast<std::size_t>(d1));
    if (!grid.periodic[0] && (i0 == 0 || i0 == grid.dims[0] - 1)) return;
    if (n == 2 && !grid.periodic[1] && (i1 == 0 || i1 == grid.dims[1] - 1)) return;
    detail::Derivs d;
    detail::point_derivatives(st, view, p, d);
    double grad2 = 0.0;
    for (int i = 0; i < n; ++i) grad2 += d.first[static_cast<std::size_t>(i)][0] * d.first[static_cast<std::size_t>(i)][0];
    double lap = 0.0;
    double hess_gg = 0.0;
    for (int i = 0; i < n; ++i) {
      lap += d.second[static_cast<std::size_t>(sym_index(i, i))][0];
      for (int j = 0; j < n; ++j) {
        hess_gg += d.first[static_cast<std::size_t>(i)][0] * d.first[static_cast<std::size_t>(j)][0] *
                   d.second[static_cast<std::size_t>(sym_index(i, j))][0];
      }
    }
    rate[p] = lap - hess_gg / (1.0 + grad2);
  });
  return rate;
}

void apply_boundary(const ParamGrid& grid, std::vector<double>& f, double t,
                    const BoundaryData& boundary) {
  if (!boundary || grid.all_periodic()) return;
  for (int i0 = 0; i0 < grid.dims[0]; ++i0) {
    for (int i1 = 0; i1 < grid.dim(1); ++i1) {
      const bool edge0 = !grid.periodic[0] && (i0 == 0 || i0 == grid.dims[0] - 1);
      const bool edge1 = grid.n == 2 && !grid.periodic[1] && (i1 == 0 || i1 == grid.dims[1] - 1);
      if (!edge0 && !edge1) continue;
      const double x1 = grid.n == 2 ? grid.coord(1, i1) : 0.0;
      f[grid.index(i0, i1)] = boundary(grid.coord(0, i0), x1, t);
    }
  }
}

double sup_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ArgumentError("solver.cfl must lie in (0, 1]");
  if (!(dt_min > 0.0 && dt_min < dt_max)) throw ArgumentError("solver dt floor must be below the ceiling");
  if (max_steps <= 0) throw ArgumentError("solver.max_steps must be positive");
  if (!(horizon > 0.0)) throw ArgumentError("solver.horizon must be positive");
  if (!(ii2_ceiling > 0.0)) throw ArgumentError("solver.ii2_ceiling must be positive");
  if (volume_floor < 0.0 || volume_floor >= 1.0) throw ArgumentError("solver.volume_floor must lie in [0, 1)");
  if (energy_floor < 0.0) throw ArgumentError("solver.energy_floor must be nonnegative");
  if (cadence < 0.0) throw ArgumentError("solver.cadence must be nonnegative");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::horizon: return "horizon";
    case StopReason::singularity: return "singularity";
    case StopReason::volume_floor: return "volume-floor";
    case StopReason::converged: return "converged";
    case StopReason::step_failure: return "step-failure";
    case StopReason::max_steps: return "max-steps";
  }
  return "unknown";
}

FlowState mcf_step_parametric(const FlowState& state, double dt, const GeometryOptions& opts) {
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  FlowState next = state;
  next.imm = rk4(state.imm, FlowMode::parametric, dt, opts);
  next.time = state.time + dt;
  next.step = state.step + 1;
  next.last_dt = dt;
  return next;
}

std::vector<double> graph_mcf_step(const ParamGrid& grid, std::span<const double> f, double t,
                                   double dt, const BoundaryData& boundary,
                                   const GeometryOptions& opts) {
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  if (f.size() != grid.size()) throw ArgumentError("height field size does not match the grid");
  const detail::StencilTable st(grid, opts.order);
  auto stage = [&](const std::vector<double>& base, const std::vector<double>& k, double a) {
    std::vector<double> y(base.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = base[i] + a * dt * k[i];
    apply_boundary(grid, y, t + a * dt, boundary);
    return y;
  };
  const std::vector<double> y0(f.begin(), f.end());
  const auto k1 = graph_rate(st, y0, opts);
  const auto k2 = graph_rate(st, stage(y0, k1, 0.5), opts);
  const auto k3 = graph_rate(st, stage(y0, k2, 0.5), opts);
  const auto k4 = graph_rate(st, stage(y0, k3, 1.0), opts);
  std::vector<double> out(y0.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = y0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  apply_boundary(grid, out, t + dt, boundary);
  require_finite(out, "height field");
  return out;
}

TorusMap map_graph_mcf_step(const TorusMap& map, double dt, const GeometryOptions& opts) {
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  return TorusMap::from_graph(rk4(map.graph(), FlowMode::map_graph, dt, opts));
}

double adaptive_dt(const GeometryFields& geom, const ParamGrid& grid, const SolverConfig& config) {
  double h_eff2 = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < geom.points; ++p) {
    for (int i = 0; i < geom.n; ++i) {
      const double h = grid.spacing(i);
      h_eff2 = std::min(h_eff2, h * h / geom.g_inv(p, i, i));
    }
  }
  const double sup_II2 = sup_of(geom.norm2_II);
  const double dt = config.cfl * h_eff2 / (2.0 * geom.n * (1.0 + sup_II2 * h_eff2));
  if (!(dt >= config.dt_min)) return config.dt_min;
  return std::min(dt, config.dt_max);
}

Immersion graph_immersion(const ParamGrid& grid, std::span<const double> height) {
  grid.validate();
  if (height.size() != grid.size()) throw ArgumentError("height field size does not match the grid");
  const int n = grid.n;
  Immersion imm(grid, n + 1);
  for (int a = 0; a < n; ++a) {
    if (grid.periodic[a]) imm.lift[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = grid.length[a];
  }
  for (int i0 = 0; i0 < grid.dims[0]; ++i0) {
    for (int i1 = 0; i1 < grid.dim(1); ++i1) {
      const std::size_t p = grid.index(i0, i1);
      auto F = imm.point(p);
      F[0] = grid.coord(0, i0);
      if (n == 2) F[1] = grid.coord(1, i1);
      F[static_cast<std::size_t>(n)] = height[p];
    }
  }
  return imm;
}

namespace {

FlowState step_state(const FlowState& state, double dt, const GeometryOptions& opts,
                     const BoundaryData& boundary) {
  switch (state.mode) {
    case FlowMode::parametric:
      return mcf_step_parametric(state, dt, opts);
    case FlowMode::map_graph: {
      FlowState next = state;
      next.imm = rk4(state.imm, FlowMode::map_graph, dt, opts);
      next.time = state.time + dt;
      next.step = state.step + 1;
      next.last_dt = dt;
      return next;
    }
    case FlowMode::graph: {
      const ParamGrid& grid = state.imm.grid;
      const auto N = static_cast<std::size_t>(state.imm.ambient_dim);
      std::vector<double> f(grid.size());
      for (std::size_t p = 0; p < f.size(); ++p) f[p] = state.imm.positions[p * N + N - 1];
      const auto g = graph_mcf_step(grid, f, state.time, dt, boundary, opts);
      FlowState next = state;
      for (std::size_t p = 0; p < f.size(); ++p) next.imm.positions[p * N + N - 1] = g[p];
      next.time = state.time + dt;
      next.step = state.step + 1;
      next.last_dt = dt;
      return next;
    }
  }
  throw ArgumentError("unknown flow mode");
}

std::vector<double> snapshot_schedule(const SolverConfig& config) {
  std::vector<double> times;
  if (config.cadence > 0.0) {
    for (long k = 1;; ++k) {
      const double t = static_cast<double>(k) * config.cadence;
      if (t > config.horizon) break;
      times.push_back(t);
    }
  }
  for (double t : config.extra_snapshot_times) {
    if (t > 0.0 && t <= config.horizon) times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

}  // namespace

FlowResult run_flow(const FlowState& initial, const SolverConfig& config, const RunHooks& hooks) {
  config.validate();
  initial.imm.validate();

  FlowResult result;
  FlowState state = initial;
  result.track.append(state.time, state.imm);

  const auto schedule = snapshot_schedule(config);
  auto next_snapshot = std::upper_bound(schedule.begin(), schedule.end(), state.time);
  double initial_volume = -1.0;

  for (;;) {
    GeometryFields geom;
    try {
      geom = geometry_fields(state.imm, config.geometry);
    } catch (const Error& e) {
      result.reason = StopReason::step_failure;
      result.message = e.what();
      break;
    }
    StepRecord rec;
    rec.step = state.step;
    rec.time = state.time;
    rec.dt = state.last_dt;
    rec.volume = integrate(state.imm.grid, geom.sqrt_det_g, std::vector<double>(geom.points, 1.0));
    rec.int_H2 = integrate(state.imm.grid, geom.sqrt_det_g, geom.norm2_H);
    rec.sup_II2 = sup_of(geom.norm2_II);
    rec.sup_H2 = sup_of(geom.norm2_H);
    result.steps.push_back(rec);
    if (hooks.observer) hooks.observer(state, geom);
    if (initial_volume < 0.0) initial_volume = rec.volume;

    if (rec.sup_II2 > config.ii2_ceiling) {
      result.reason = StopReason::singularity;
      break;
    }
    if (rec.volume < config.volume_floor * initial_volume) {
      result.reason = StopReason::volume_floor;
      break;
    }
    if (config.energy_floor > 0.0 && rec.int_H2 < config.energy_floor) {
      result.reason = StopReason::converged;
      break;
    }
    if (state.time >= config.horizon) {
      result.reason = StopReason::horizon;
      break;
    }
    if (state.step - initial.step >= config.max_steps) {
      result.reason = StopReason::max_steps;
      break;
    }

    double dt = adaptive_dt(geom, state.imm.grid, config);
    double target = config.horizon;
    if (next_snapshot != schedule.end()) target = std::min(target, *next_snapshot);
    bool lands = false;
    if (state.time + dt >= target) {
      dt = target - state.time;
      lands = true;
    }

    try {
      FlowState next = step_state(state, dt, config.geometry, hooks.boundary);
      if (lands) next.time = target;
      state = std::move(next);
    } catch (const Error& e) {
      result.reason = StopReason::step_failure;
      result.message = e.what();
      break;
    }

    if (next_snapshot != schedule.end() && state.time >= *next_snapshot) {
      result.track.append(state.time, state.imm);
      while (next_snapshot != schedule.end() && *next_snapshot <= state.time) ++next_snapshot;
    }
  }

  if (state.time > result.track.back().time) result.track.append(state.time, state.imm);
  result.final_state = std::move(state);
  return result;
}

}  // namespace geoflow
