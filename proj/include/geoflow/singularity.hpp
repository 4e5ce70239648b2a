#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "geoflow/geometry.hpp"
#include "geoflow/immersion.hpp"
#include "geoflow/track.hpp"

namespace geoflow {

/// Space-time point (y0, t0) at which the backward heat kernel is centered.
struct DensityProbe {
  std::vector<double> y0;
  double t0 = 0.0;
};

/// Backward heat kernel (4 pi (t0 - t))^{-n/2} exp(-|y - y0|^2 / 4 (t0 - t)); the power
/// uses the submanifold dimension n, not the ambient dimension.
double heat_kernel(int n, std::span<const double> y, const DensityProbe& probe, double t);

/// Quadrature of the backward heat kernel against the area element.
/// Throws ProbeTimeError for t >= t0 and UnsupportedAmbientError on a torus ambient.
double gaussian_density(const Immersion& imm, double t, const DensityProbe& probe,
                        const GeometryOptions& opts = {});

struct LedgerEntry {
  double time = 0.0;
  double value = 0.0;
  bool increase_flag = false;  // value exceeded the previous one by more than the slack
};

struct DensityLedger {
  DensityProbe probe;
  std::vector<LedgerEntry> entries;
  std::size_t flags = 0;
  std::size_t skipped = 0;  // snapshots at or after t0
  double max_increase = 0.0;
  double limit = 0.0;
  std::string limit_method;
};

inline constexpr std::size_t kRichardsonPoints = 5;

/// Densities along a track with increases above `slack` flagged. The limit as
/// t -> t0 is extrapolated by polynomial (Richardson/Neville) extrapolation to
/// t0 - t = 0 through the last kRichardsonPoints entries.
DensityLedger monotonicity_ledger(const SpaceTimeTrack& track, const DensityProbe& probe,
                                  const GeometryOptions& opts = {}, double slack = 1e-6);

/// Neville evaluation at x = 0 of the interpolating polynomial through (x_k, y_k).
double extrapolate_to_zero(std::span<const double> x, std::span<const double> y);

/// (y, t) -> (lambda (y - y0), lambda^2 (t - t0)). Throws ArgumentError for lambda <= 0.
Immersion parabolic_dilate(const Immersion& imm, std::span<const double> y0, double lambda);
SpaceTimeTrack parabolic_dilate(const SpaceTimeTrack& track, const DensityProbe& probe,
                                double lambda);

struct TypeOneFit {
  double t0 = 0.0;
  double C = 0.0;
  std::vector<double> times;
  std::vector<double> sup_II2;
  std::vector<double> series;  // sup|II|^2 (t0 - t) per snapshot
  std::size_t window_begin = 0;
};

/// Type-I blow-up diagnostic: t0 from a least-squares line through
/// 1 / sup|II|^2 over the final 20% of snapshots (at least 10), C the largest
/// rescaled curvature over that window. Throws FitFailureError when
/// 1 / sup|II|^2 is not strictly decreasing over the window.
TypeOneFit type1_diagnostic(const SpaceTimeTrack& track, const GeometryOptions& opts = {});

/// max over snapshots and points of |F|^2 + 2 n t - r0^2.
double heat_bound_check(const SpaceTimeTrack& track, double r0);

}  // namespace geoflow
