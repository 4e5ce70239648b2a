#include "geoflow/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "geoflow/errors.hpp"
#include "geoflow/parallel.hpp"

namespace geoflow {

double heat_kernel(int n, std::span<const double> y, const DensityProbe& probe, double t) {
  const double tau = probe.t0 - t;
  double r2 = 0.0;
  for (std::size_t c = 0; c < y.size(); ++c) {
    const double d = y[c] - (c < probe.y0.size() ? probe.y0[c] : 0.0);
    r2 += d * d;
  }
  return std::pow(4.0 * std::numbers::pi * tau, -0.5 * n) * std::exp(-r2 / (4.0 * tau));
}

double gaussian_density(const Immersion& imm, double t, const DensityProbe& probe,
                        const GeometryOptions& opts) {
  if (!(t < probe.t0)) throw ProbeTimeError("density needs t < t0");
  if (imm.ambient == AmbientKind::flat_torus) {
    throw UnsupportedAmbientError("Gaussian density is defined for Euclidean ambients only");
  }
  if (probe.y0.size() > static_cast<std::size_t>(imm.ambient_dim)) {
    throw ArgumentError("probe point has more coordinates than the ambient space");
  }
  const MetricFields metric = induced_metric(imm, opts);
  std::vector<double> rho(imm.num_points(), 0.0);
  for_each_index(opts.exec, imm.num_points(),
                 [&](std::size_t p) { rho[p] = heat_kernel(imm.grid.n, imm.point(p), probe, t); });
  return integrate(imm.grid, metric.sqrt_det_g, rho);
}

double extrapolate_to_zero(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw ArgumentError("extrapolation needs matching samples");
  std::vector<double> p(y.begin(), y.end());
  const std::size_t m = x.size();
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      const double xi = x[i];
      const double xj = x[i + level];
      p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
    }
  }
  return p[0];
}

DensityLedger monotonicity_ledger(const SpaceTimeTrack& track, const DensityProbe& probe,
                                  const GeometryOptions& opts, double slack) {
  DensityLedger ledger;
  ledger.probe = probe;
  for (const Snapshot& snap : track) {
    if (!(snap.time < probe.t0)) {
      ++ledger.skipped;
      continue;
    }
    LedgerEntry e;
    e.time = snap.time;
    e.value = gaussian_density(snap.imm, snap.time, probe, opts);
    if (!ledger.entries.empty()) {
      const double increase = e.value - ledger.entries.back().value;
      ledger.max_increase = std::max(ledger.max_increase, increase);
      if (increase > slack) {
        e.increase_flag = true;
        ++ledger.flags;
      }
    }
    ledger.entries.push_back(e);
  }
  if (ledger.entries.empty()) throw ProbeTimeError("no snapshot precedes the probe time");

  const std::size_t k = std::min(kRichardsonPoints, ledger.entries.size());
  std::vector<double> tau;
  std::vector<double> val;
  for (std::size_t i = ledger.entries.size() - k; i < ledger.entries.size(); ++i) {
    tau.push_back(probe.t0 - ledger.entries[i].time);
    val.push_back(ledger.entries[i].value);
  }
  ledger.limit = extrapolate_to_zero(tau, val);
  ledger.limit_method = "richardson-neville-" + std::to_string(k);
  return ledger;
}

Immersion parabolic_dilate(const Immersion& imm, std::span<const double> y0, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("dilation scale must be positive");
  if (imm.ambient != AmbientKind::euclidean) {
    throw UnsupportedAmbientError("parabolic dilation is defined for Euclidean ambients only");
  }
  Immersion out = imm;
  const auto N = static_cast<std::size_t>(imm.ambient_dim);
  for (std::size_t p = 0; p < out.num_points(); ++p) {
    auto F = out.point(p);
    for (std::size_t c = 0; c < N; ++c) {
      F[c] = lambda * (F[c] - (c < y0.size() ? y0[c] : 0.0));
    }
  }
  for (auto& l : out.lift) {
    for (double& v : l) v *= lambda;
  }
  return out;
}

SpaceTimeTrack parabolic_dilate(const SpaceTimeTrack& track, const DensityProbe& probe,
                                double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("dilation scale must be positive");
  SpaceTimeTrack out;
  for (const Snapshot& snap : track) {
    out.append(lambda * lambda * (snap.time - probe.t0), parabolic_dilate(snap.imm, probe.y0, lambda));
  }
  return out;
}

TypeOneFit type1_diagnostic(const SpaceTimeTrack& track, const GeometryOptions& opts) {
  const std::size_t K = track.size();
  if (K < 3) throw FitFailureError("type-I fit needs at least three snapshots");
  TypeOneFit fit;
  for (const Snapshot& snap : track) {
    const GeometryFields geom = geometry_fields(snap.imm, opts);
    fit.times.push_back(snap.time);
    fit.sup_II2.push_back(*std::max_element(geom.norm2_II.begin(), geom.norm2_II.end()));
  }

  const std::size_t fifth = (K + 4) / 5;
  const std::size_t window = std::min(K, std::max<std::size_t>(fifth, 10));
  fit.window_begin = K - window;

  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = fit.window_begin; k < K; ++k) {
    const double inv = 1.0 / fit.sup_II2[k];
    if (!std::isfinite(inv)) throw FitFailureError("second fundamental form vanishes in the fit window");
    if (!y.empty() && !(inv < y.back())) {
      throw FitFailureError("1/sup|II|^2 is not decreasing over the fit window");
    }
    x.push_back(fit.times[k]);
    y.push_back(inv);
  }

  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) throw FitFailureError("fitted 1/sup|II|^2 does not decrease");
  fit.t0 = mx - my / slope;

  fit.C = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) {
    fit.series.push_back(fit.sup_II2[k] * (fit.t0 - fit.times[k]));
    if (k >= fit.window_begin) fit.C = std::max(fit.C, fit.series.back());
  }
  return fit;
}

double heat_bound_check(const SpaceTimeTrack& track, double r0) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Snapshot& snap : track) {
    const double drift = 2.0 * snap.imm.grid.n * snap.time - r0 * r0;
    for (std::size_t p = 0; p < snap.imm.num_points(); ++p) {
      double r2 = 0.0;
      for (double c : snap.imm.point(p)) r2 += c * c;
      worst = std::max(worst, r2 + drift);
    }
  }
  return worst;
}

}  // namespace geoflow
