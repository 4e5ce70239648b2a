#include "geoflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "geoflow/errors.hpp"
#include "geoflow/oracles.hpp"
#include "geoflow/singularity.hpp"
#include "geoflow/symplectic.hpp"
#include "geoflow/track_io.hpp"

namespace geoflow {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int dim_at(const std::vector<int>& dims, std::size_t k) {
  return k < dims.size() ? dims[k] : dims.front();
}

struct Table {
  std::vector<std::string> header;
  std::deque<std::vector<double>> columns;  // deque keeps returned references valid

  std::vector<double>& add(const std::string& name, std::size_t rows) {
    header.push_back(name);
    columns.emplace_back(rows, kNaN);
    return columns.back();
  }
};

/// Derivative at interior sample k of a nonuniformly sampled series.
double centered_derivative(const std::vector<double>& t, const std::vector<double>& f, std::size_t k) {
  const double h1 = t[k] - t[k - 1];
  const double h2 = t[k + 1] - t[k];
  return -h2 / (h1 * (h1 + h2)) * f[k - 1] + (h2 - h1) / (h1 * h2) * f[k] +
         h1 / (h2 * (h1 + h2)) * f[k + 1];
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FlowState initial_state(const ExperimentConfig& config) {
  const InitialData& in = config.initial;
  FlowState s;
  s.mode = config.mode;
  if (!in.samples.empty()) {
    const SpaceTimeTrack t = read_track(in.samples);
    s.imm = t.back().imm;
    return s;
  }
  const int d0 = dim_at(config.dims, 0);
  const int d1 = dim_at(config.dims, 1);
  switch (config.mode) {
    case FlowMode::parametric:
      if (in.shape == "circle") {
        s.imm = circle_immersion(in.radius, in.ambient_dim, d0);
      } else if (in.shape == "ellipse") {
        s.imm = ellipse_immersion(in.a, in.b, in.ambient_dim, d0);
      } else if (in.shape == "product_torus") {
        s.imm = product_torus_immersion(in.r1, in.r2, d0, d1);
      } else if (in.shape == "plane") {
        s.imm = plane_immersion(static_cast<int>(config.dims.size()), in.ambient_dim, d0, in.width);
      } else {
        throw ConfigError("initial.shape", "key 'initial.shape': '" + in.shape +
                                               "' is not a parametric shape");
      }
      break;
    case FlowMode::graph: {
      if (in.shape != "grim_reaper") {
        throw ConfigError("initial.shape", "key 'initial.shape': graph mode supports grim_reaper");
      }
      const ParamGrid grid = ParamGrid::interval(d0, in.interval[0], in.interval[1]);
      std::vector<double> f(grid.size());
      for (int i = 0; i < d0; ++i) f[static_cast<std::size_t>(i)] = grim_reaper(grid.coord(0, i), 0.0);
      s.imm = graph_immersion(grid, f);
      break;
    }
    case FlowMode::map_graph:
      if (in.shape != "shears") {
        throw ConfigError("initial.shape", "key 'initial.shape': map-graph mode supports shears");
      }
      s.imm = make_area_preserving_map(in.shears, d0, d1, in.period, in.period).map.graph();
      break;
  }
  return s;
}

RunHooks run_hooks(const ExperimentConfig& config) {
  RunHooks hooks;
  if (config.mode == FlowMode::graph) {
    hooks.boundary = [](double x, double, double t) { return grim_reaper(x, t); };
  }
  return hooks;
}

Analysis analyze_track(const SpaceTimeTrack& track, const DiagnosticsConfig& diag,
                       const std::optional<std::string>& stop_reason) {
  if (track.empty()) throw ArgumentError("cannot analyze an empty track");
  GeometryOptions opts;
  opts.order = diag.order.value_or(StencilOrder::second);
  const std::size_t K = track.size();
  const Immersion& first = track.front().imm;
  const bool surface_r4 = first.grid.n == 2 && first.ambient_dim == 4;

  json report;
  report["snapshots"] = K;
  report["n"] = first.grid.n;
  report["ambient_dim"] = first.ambient_dim;
  report["ambient"] = first.ambient == AmbientKind::flat_torus ? "flat-torus" : "euclidean";
  report["first_time"] = track.front().time;
  report["last_time"] = track.back().time;
  if (stop_reason) report["stop_reason"] = *stop_reason;

  Table table;
  auto& t_col = table.add("t", K);
  auto& vol = table.add("vol", K);
  auto& int_H2 = table.add("int_H2", K);
  auto& sup_II2 = table.add("sup_II2", K);
  auto& sup_H2 = table.add("sup_H2", K);
  std::vector<double>* min_eta = surface_r4 ? &table.add("min_eta", K) : nullptr;
  std::vector<GeometryFields> geoms;
  geoms.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const Snapshot& s = track[k];
    geoms.push_back(geometry_fields(s.imm, opts));
    const GeometryFields& g = geoms.back();
    t_col[k] = s.time;
    vol[k] = integrate(s.imm.grid, g.sqrt_det_g, std::vector<double>(g.points, 1.0));
    int_H2[k] = integrate(s.imm.grid, g.sqrt_det_g, g.norm2_H);
    sup_II2[k] = *std::max_element(g.norm2_II.begin(), g.norm2_II.end());
    sup_H2[k] = *std::max_element(g.norm2_H.begin(), g.norm2_H.end());
    if (min_eta) {
      const auto eta = hodge_star_form(g, KahlerFormPair::standard().double_prime);
      (*min_eta)[k] = *std::min_element(eta.begin(), eta.end());
    }
  }
  auto& first_variation = table.add("first_variation", K);
  for (std::size_t k = 1; k + 1 < K; ++k) {
    first_variation[k] = centered_derivative(t_col, vol, k) + int_H2[k];
  }

  // Type-I fit, also the source of "auto" probe times.
  std::optional<TypeOneFit> fit;
  std::string fit_error;
  const bool need_fit = diag.type1 || !diag.dilations.empty() ||
                        std::any_of(diag.probes.begin(), diag.probes.end(),
                                    [](const ProbeSpec& p) { return !p.t0; });
  if (need_fit) {
    try {
      fit = type1_diagnostic(track, opts);
    } catch (const Error& e) {
      fit_error = e.what();
    }
  }
  if (diag.type1) {
    if (fit) {
      report["type1"] = {{"t0", number(fit->t0)},
                         {"C", number(fit->C)},
                         {"window_begin", fit->window_begin}};
      auto& series = table.add("type1_series", K);
      for (std::size_t k = 0; k < K; ++k) series[k] = fit->series[k];
    } else {
      report["type1"] = {{"error", fit_error}};
    }
  }

  auto resolve = [&](const ProbeSpec& spec) -> std::optional<DensityProbe> {
    DensityProbe p;
    p.y0 = spec.y0;
    if (spec.t0) {
      p.t0 = *spec.t0;
    } else if (fit) {
      p.t0 = fit->t0;
    } else {
      return std::nullopt;
    }
    return p;
  };

  json probes = json::array();
  for (std::size_t i = 0; i < diag.probes.size(); ++i) {
    json entry;
    entry["y0"] = diag.probes[i].y0;
    entry["t0_auto"] = !diag.probes[i].t0.has_value();
    auto& col = table.add("density_" + std::to_string(i), K);
    const auto probe = resolve(diag.probes[i]);
    if (!probe) {
      entry["error"] = "probe time could not be fitted: " + fit_error;
      probes.push_back(entry);
      continue;
    }
    entry["t0"] = probe->t0;
    try {
      const DensityLedger ledger = monotonicity_ledger(track, *probe, opts, diag.density_slack);
      std::size_t e = 0;
      for (std::size_t k = 0; k < K && e < ledger.entries.size(); ++k) {
        if (track[k].time == ledger.entries[e].time) col[k] = ledger.entries[e++].value;
      }
      entry["flags"] = ledger.flags;
      entry["skipped"] = ledger.skipped;
      entry["max_increase"] = number(ledger.max_increase);
      entry["limit"] = number(ledger.limit);
      entry["limit_method"] = ledger.limit_method;
    } catch (const Error& e) {
      entry["error"] = e.what();
    }
    probes.push_back(entry);
  }
  if (!diag.probes.empty()) report["probes"] = probes;

  if (!diag.dilations.empty()) {
    json shrinkers = json::array();
    std::optional<DensityProbe> center;
    if (!diag.probes.empty()) {
      center = resolve(diag.probes.front());
    } else if (fit) {
      center = DensityProbe{{}, fit->t0};
    }
    for (double lambda : diag.dilations) {
      json entry;
      entry["lambda"] = lambda;
      try {
        if (!center) throw FitFailureError("no dilation center: " + fit_error);
        const SpaceTimeTrack dilated = parabolic_dilate(track, *center, lambda);
        std::size_t best = K;
        for (std::size_t k = 0; k < K; ++k) {
          if (dilated[k].time >= 0.0) continue;
          if (best == K || std::abs(dilated[k].time + 1.0) < std::abs(dilated[best].time + 1.0)) best = k;
        }
        if (best == K) throw ProbeTimeError("no dilated snapshot precedes the singular time");
        entry["s"] = dilated[best].time;
        entry["residual"] = number(self_shrinker_residual(dilated[best].imm, dilated[best].time, opts));
      } catch (const Error& e) {
        entry["error"] = e.what();
      }
      shrinkers.push_back(entry);
    }
    report["self_shrinker"] = shrinkers;
  }

  if (diag.symplectic) {
    json sym;
    if (!surface_r4 || !first.grid.all_periodic()) {
      sym["error"] = "symplectic suite needs a closed surface in four dimensions";
    } else {
      const auto forms = KahlerFormPair::standard();
      auto& lag = table.add("sup_star_omega_prime", K);
      auto& weighted = table.add("weighted_energy", K);
      auto& gap = table.add("gauss_bonnet_gap", K);
      auto& pinch = table.add("pinching", K);
      auto& linear = table.add("linearity_deviation", K);
      auto& resid = table.add("eta_residual", K);
      std::size_t pinching_errors = 0;
      for (std::size_t k = 0; k < K; ++k) {
        const GeometryFields& g = geoms[k];
        const auto ep = hodge_star_form(g, forms.prime);
        double d = 0.0;
        for (double v : ep) d = std::max(d, std::abs(v));
        lag[k] = d;
        try {
          weighted[k] = weighted_energy(g, track[k].imm.grid, track[k].time).weighted;
        } catch (const NonpositiveEtaError&) {
        }
        gap[k] = gauss_bonnet_gap(track[k].imm, g);
        try {
          pinch[k] = pinching_check(g);
        } catch (const NotLagrangianError&) {
          ++pinching_errors;
        }
        if (track[k].imm.ambient == AmbientKind::flat_torus) {
          linear[k] = linearity_deviation(symplectic_state(TorusMap::from_graph(track[k].imm), opts)).deviation;
        }
      }
      const auto residuals = eta_evolution_residual(track, opts);
      for (std::size_t k = 0; k < residuals.size(); ++k) resid[k + 1] = residuals[k].residual;

      // Cubic form symmetry at random points and tangent vectors of the last snapshot.
      std::mt19937_64 rng(diag.seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      std::uniform_int_distribution<std::size_t> pick(0, geoms.back().points - 1);
      double asym = 0.0;
      for (int trial = 0; trial < 64; ++trial) {
        const std::size_t p = pick(rng);
        double X[2], Y[2], Z[2];
        for (double* v : {X, Y, Z}) {
          v[0] = unit(rng);
          v[1] = unit(rng);
        }
        asym = std::max(asym, cubic_form_asymmetry(geoms.back(), p, forms.prime, X, Y, Z));
      }

      auto max_of = [](const std::vector<double>& v) {
        double m = -std::numeric_limits<double>::infinity();
        for (double x : v) {
          if (!std::isnan(x)) m = std::max(m, x);
        }
        return m;
      };
      sym["sup_star_omega_prime"] = number(max_of(lag));
      sym["max_pinching"] = number(max_of(pinch));
      sym["pinching_not_lagrangian"] = pinching_errors;
      std::vector<double> abs_gap(gap.size());
      std::transform(gap.begin(), gap.end(), abs_gap.begin(), [](double v) { return std::abs(v); });
      sym["max_abs_gauss_bonnet_gap"] = number(max_of(abs_gap));
      sym["final_linearity_deviation"] = number(linear.back());
      sym["max_eta_residual"] = number(max_of(resid));
      sym["cubic_form_asymmetry"] = number(asym);
      if (min_eta) {
        sym["initial_min_eta"] = number(min_eta->front());
        sym["final_min_eta"] = number(min_eta->back());
      }
    }
    report["symplectic"] = sym;
  }

  std::ostringstream csv;
  for (std::size_t c = 0; c < table.header.size(); ++c) csv << (c ? "," : "") << table.header[c];
  if (stop_reason) csv << ",stop_reason";
  csv << "\n";
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) csv << ",";
      const double v = table.columns[c][k];
      if (!std::isnan(v)) csv << format_number(v);
    }
    if (stop_reason) csv << "," << (k + 1 == K ? *stop_reason : "");
    csv << "\n";
  }
  return {csv.str(), report.dump(2) + "\n"};
}

RunOutcome run_experiment(const ExperimentConfig& config) {
  FlowState init = initial_state(config);
  RunOutcome out;
  out.flow = run_flow(init, config.solver, run_hooks(config));
  out.exit_code = out.flow.reason == StopReason::step_failure ? 2 : 0;
  write_track(config.track_path, out.flow.track);

  DiagnosticsConfig diag = config.diagnostics;
  if (!diag.order) diag.order = config.solver.geometry.order;
  std::string reason = to_string(out.flow.reason);
  out.analysis = analyze_track(out.flow.track, diag, reason);
  write_file_atomic(config.csv_path, out.analysis.csv);
  if (!config.diagnostics.report.empty()) {
    json report = json::parse(out.analysis.report_json);
    report["mode"] = to_string(config.mode);
    report["steps"] = out.flow.final_state.step;
    if (!out.flow.message.empty()) report["message"] = out.flow.message;
    out.analysis.report_json = report.dump(2) + "\n";
    write_file_atomic(config.diagnostics.report, out.analysis.report_json);
  }
  return out;
}

}  // namespace geoflow
