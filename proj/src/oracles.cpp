#include "geoflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geoflow/errors.hpp"
#include "geoflow/parallel.hpp"

namespace geoflow {

void ShrinkingSphereParams::validate() const {
  if (!(r0 > 0.0)) throw ArgumentError("initial radius must be positive");
  if (n < 1) throw ArgumentError("sphere dimension must be at least 1");
  if (ambient_dim <= n) throw ArgumentError("ambient dimension must exceed the sphere dimension");
}

double shrinking_radius(const ShrinkingSphereParams& p, double t) {
  p.validate();
  if (t < 0.0) throw DomainError("time must be nonnegative");
  if (t >= p.extinction_time()) throw PastExtinctionError("sphere has already collapsed");
  return std::sqrt(p.r0 * p.r0 - 2.0 * p.n * t);
}

Immersion circle_immersion(double radius, int ambient_dim, int dims,
                           std::span<const double> center) {
  if (!(radius > 0.0)) throw ArgumentError("radius must be positive");
  if (ambient_dim < 2) throw ArgumentError("a circle needs at least two ambient dimensions");
  Immersion imm(ParamGrid::periodic_1d(dims, 2.0 * std::numbers::pi), ambient_dim);
  for (int i = 0; i < dims; ++i) {
    const double x = imm.grid.coord(0, i);
    auto F = imm.point(static_cast<std::size_t>(i));
    F[0] = radius * std::cos(x);
    F[1] = radius * std::sin(x);
    for (std::size_t c = 0; c < center.size() && c < F.size(); ++c) F[c] += center[c];
  }
  return imm;
}

Immersion ellipse_immersion(double a, double b, int ambient_dim, int dims) {
  if (!(a > 0.0 && b > 0.0)) throw ArgumentError("semi-axes must be positive");
  Immersion imm(ParamGrid::periodic_1d(dims, 2.0 * std::numbers::pi), ambient_dim);
  for (int i = 0; i < dims; ++i) {
    const double x = imm.grid.coord(0, i);
    auto F = imm.point(static_cast<std::size_t>(i));
    F[0] = a * std::cos(x);
    F[1] = b * std::sin(x);
  }
  return imm;
}

Immersion product_torus_immersion(double r1, double r2, int dims0, int dims1) {
  if (!(r1 > 0.0 && r2 > 0.0)) throw ArgumentError("radii must be positive");
  const double tau = 2.0 * std::numbers::pi;
  Immersion imm(ParamGrid::periodic_2d(dims0, dims1, tau, tau), 4);
  for (int i0 = 0; i0 < dims0; ++i0) {
    for (int i1 = 0; i1 < dims1; ++i1) {
      const double x = imm.grid.coord(0, i0);
      const double y = imm.grid.coord(1, i1);
      auto F = imm.point(imm.grid.index(i0, i1));
      F[0] = r1 * std::cos(x);
      F[1] = r1 * std::sin(x);
      F[2] = r2 * std::cos(y);
      F[3] = r2 * std::sin(y);
    }
  }
  return imm;
}

Immersion plane_immersion(int n, int ambient_dim, int dims, double width) {
  if (!(width > 0.0)) throw ArgumentError("plane width must be positive");
  ParamGrid grid = n == 1 ? ParamGrid::periodic_1d(dims, width)
                          : ParamGrid::periodic_2d(dims, dims, width, width);
  grid.origin = {-0.5 * width, n == 2 ? -0.5 * width : 0.0};
  Immersion imm(grid, ambient_dim);
  for (int a = 0; a < n; ++a) imm.lift[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = width;
  for (int i0 = 0; i0 < grid.dims[0]; ++i0) {
    for (int i1 = 0; i1 < grid.dim(1); ++i1) {
      auto F = imm.point(grid.index(i0, i1));
      F[0] = grid.coord(0, i0);
      if (n == 2) F[1] = grid.coord(1, i1);
    }
  }
  imm.validate();
  return imm;
}

std::vector<double> cadence_times(double cadence, double horizon) {
  if (!(cadence > 0.0)) throw ArgumentError("cadence must be positive");
  std::vector<double> times;
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * cadence;
    if (t > horizon) break;
    times.push_back(t);
  }
  return times;
}

SpaceTimeTrack exact_circle_track(double r0, int ambient_dim, int dims, double cadence,
                                  double horizon) {
  const auto times = cadence_times(cadence, horizon);
  return exact_circle_track(r0, ambient_dim, dims, times);
}

SpaceTimeTrack exact_circle_track(double r0, int ambient_dim, int dims,
                                  std::span<const double> times) {
  const ShrinkingSphereParams params{r0, 1, ambient_dim};
  SpaceTimeTrack track;
  for (double t : times) {
    track.append(t, circle_immersion(shrinking_radius(params, t), ambient_dim, dims));
  }
  return track;
}

SpaceTimeTrack exact_product_torus_track(double r1, double r2, int dims0, int dims1,
                                         double cadence, double horizon) {
  const auto times = cadence_times(cadence, horizon);
  return exact_product_torus_track(r1, r2, dims0, dims1, times);
}

SpaceTimeTrack exact_product_torus_track(double r1, double r2, int dims0, int dims1,
                                         std::span<const double> times) {
  // The flow of a metric product is the product of the factor flows.
  const ShrinkingSphereParams f1{r1, 1, 2};
  const ShrinkingSphereParams f2{r2, 1, 2};
  SpaceTimeTrack track;
  for (double t : times) {
    track.append(t, product_torus_immersion(shrinking_radius(f1, t), shrinking_radius(f2, t),
                                            dims0, dims1));
  }
  return track;
}

double grim_reaper(double x, double t) {
  if (!(std::abs(x) < 0.5 * std::numbers::pi)) throw DomainError("grim reaper needs |x| < pi/2");
  return t - std::log(std::cos(x));
}

double self_shrinker_residual(const Immersion& imm, double s, const GeometryOptions& opts) {
  if (!(s < 0.0)) throw ArgumentError("self-shrinker time must be negative");
  const GeometryFields geom = geometry_fields(imm, opts);
  const auto N = static_cast<std::size_t>(imm.ambient_dim);
  std::vector<double> residual(imm.num_points(), 0.0);
  for_each_index(opts.exec, imm.num_points(), [&](std::size_t p) {
    // F^perp from the stored tangents and inverse metric.
    const auto F = imm.point(p);
    double perp[kMaxAmbientDim];
    for (std::size_t c = 0; c < N; ++c) perp[c] = F[c];
    double coef[2] = {0.0, 0.0};
    for (int k = 0; k < geom.n; ++k) {
      const auto T = geom.tangent_at(p, k);
      for (std::size_t c = 0; c < N; ++c) coef[k] += F[c] * T[c];
    }
    for (int l = 0; l < geom.n; ++l) {
      double t = 0.0;
      for (int k = 0; k < geom.n; ++k) t += coef[k] * geom.g_inv(p, k, l);
      const auto T = geom.tangent_at(p, l);
      for (std::size_t c = 0; c < N; ++c) perp[c] -= t * T[c];
    }
    const auto H = geom.H(p);
    double r2 = 0.0;
    for (std::size_t c = 0; c < N; ++c) {
      const double d = H[c] - perp[c] / (2.0 * s);
      r2 += d * d;
    }
    residual[p] = std::sqrt(r2);
  });
  return *std::max_element(residual.begin(), residual.end());
}

}  // namespace geoflow
