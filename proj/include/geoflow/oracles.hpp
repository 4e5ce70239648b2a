#pragma once

#include <span>
#include <vector>

#include "geoflow/geometry.hpp"
#include "geoflow/immersion.hpp"
#include "geoflow/track.hpp"

namespace geoflow {

/// Round n-sphere of radius r0 in R^N shrinking under the flow.
struct ShrinkingSphereParams {
  double r0 = 1.0;
  int n = 1;
  int ambient_dim = 2;

  double extinction_time() const { return r0 * r0 / (2.0 * n); }
  void validate() const;
};

/// sqrt(r0^2 - 2nt). Throws PastExtinctionError for t >= r0^2 / 2n.
double shrinking_radius(const ShrinkingSphereParams& p, double t);

/// Circle of the given radius in the first two coordinates of R^N, parametrized
/// by angle on [0, 2pi).
Immersion circle_immersion(double radius, int ambient_dim, int dims,
                           std::span<const double> center = {});

/// Ellipse with semi-axes a (x) and b (y) in the first two coordinates of R^N.
Immersion ellipse_immersion(double a, double b, int ambient_dim, int dims);

/// (r1 cos x, r1 sin x, r2 cos y, r2 sin y) in R^4.
Immersion product_torus_immersion(double r1, double r2, int dims0, int dims1);

/// Flat n-plane through the origin spanned by the first n coordinates of R^N,
/// sampled on one period [-width/2, width/2)^n of a periodic chart.
Immersion plane_immersion(int n, int ambient_dim, int dims, double width);

/// Snapshots at times 0, cadence, 2 cadence, ... <= horizon.
std::vector<double> cadence_times(double cadence, double horizon);

SpaceTimeTrack exact_circle_track(double r0, int ambient_dim, int dims, double cadence,
                                  double horizon);
SpaceTimeTrack exact_circle_track(double r0, int ambient_dim, int dims,
                                  std::span<const double> times);

SpaceTimeTrack exact_product_torus_track(double r1, double r2, int dims0, int dims1,
                                         double cadence, double horizon);
SpaceTimeTrack exact_product_torus_track(double r1, double r2, int dims0, int dims1,
                                         std::span<const double> times);

/// Translating solution t - log cos x of the one-dimensional graph flow.
/// Throws DomainError for |x| >= pi/2.
double grim_reaper(double x, double t);

/// max over points of |H - F^perp / (2s)|, s < 0.
double self_shrinker_residual(const Immersion& imm, double s, const GeometryOptions& opts = {});

}  // namespace geoflow
