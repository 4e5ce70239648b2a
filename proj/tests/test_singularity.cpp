#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "geoflow/errors.hpp"
#include "geoflow/oracles.hpp"
#include "geoflow/singularity.hpp"
#include "geoflow/symplectic.hpp"

using namespace geoflow;

namespace {

constexpr double pi = std::numbers::pi;

const GeometryOptions kFourth{StencilOrder::fourth, Exec::parallel};

// Density of a round circle of radius R centered at the probe point, by an
// independent trapezoid rule on the angle.
double circle_density_quadrature(double R, double tau, int samples) {
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double th = 2 * pi * k / samples;
    const double x = R * std::cos(th), y = R * std::sin(th);
    sum += std::exp(-(x * x + y * y) / (4 * tau)) / std::sqrt(4 * pi * tau) * R;
  }
  return sum * 2 * pi / samples;
}

}  // namespace

TEST_CASE("heat kernel uses the submanifold dimension") {
  DensityProbe probe{{0.0, 0.0, 0.0}, 1.0};
  std::vector<double> y{0.0, 0.0, 0.0};
  CHECK(heat_kernel(1, y, probe, 0.75) == doctest::Approx(1.0 / std::sqrt(pi)));
  CHECK(heat_kernel(2, y, probe, 0.75) == doctest::Approx(1.0 / pi));
}

TEST_CASE("density of the shrinking circle is sqrt(2 pi / e)") {
  const double expect = std::sqrt(2 * pi / std::exp(1.0));
  // The quadrature oracle agrees with the closed form.
  CHECK(circle_density_quadrature(std::sqrt(2 * 0.3), 0.3, 64) == doctest::Approx(expect).epsilon(1e-14));
  DensityProbe probe{{0.0, 0.0}, 0.5};
  for (double t : {0.0, 0.2, 0.45}) {
    auto imm = circle_immersion(std::sqrt(1 - 2 * t), 2, 256);
    CHECK(gaussian_density(imm, t, probe, kFourth) == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("density of a circle off the probe matches quadrature") {
  // Circle radius 1 centered at the origin, probe at the origin with tau = 0.2.
  DensityProbe probe{{0.0, 0.0}, 0.2};
  auto imm = circle_immersion(1.0, 2, 256);
  CHECK(gaussian_density(imm, 0.0, probe, kFourth) ==
        doctest::Approx(circle_density_quadrature(1.0, 0.2, 4096)).epsilon(1e-7));
}

TEST_CASE("density of a plane is one") {
  auto imm = plane_immersion(2, 3, 64, 4.0);
  DensityProbe probe{{0.0, 0.0, 0.0}, 0.01};
  CHECK(gaussian_density(imm, 0.0, probe) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density far from the submanifold vanishes") {
  auto imm = circle_immersion(1.0, 2, 128);
  DensityProbe probe{{10.0, 0.0}, 1.0};
  CHECK(gaussian_density(imm, 0.0, probe) < 1e-6);
}

TEST_CASE("density is independent of the ambient dimension") {
  DensityProbe p2{{0.1, 0.0}, 0.3};
  DensityProbe p5{{0.1, 0.0, 0.0, 0.0, 0.0}, 0.3};
  const double a = gaussian_density(circle_immersion(0.8, 2, 128), 0.0, p2);
  const double b = gaussian_density(circle_immersion(0.8, 5, 128), 0.0, p5);
  CHECK(std::abs(a - b) <= 1e-12);
}

TEST_CASE("density errors") {
  auto imm = circle_immersion(1.0, 2, 64);
  DensityProbe probe{{0.0, 0.0}, 0.5};
  CHECK_THROWS_AS(gaussian_density(imm, 0.5, probe), ProbeTimeError);
  CHECK_THROWS_AS(gaussian_density(imm, 0.7, probe), ProbeTimeError);
  auto torus_graph = TorusMap::identity(16, 16).graph();
  DensityProbe p4{{0.0, 0.0, 0.0, 0.0}, 1.0};
  CHECK_THROWS_AS(gaussian_density(torus_graph, 0.0, p4), UnsupportedAmbientError);
}

TEST_CASE("monotonicity ledger on the exact circle track") {
  auto track = exact_circle_track(1.0, 2, 256, 0.01, 0.495);
  DensityProbe probe{{0.0, 0.0}, 0.5};
  auto ledger = monotonicity_ledger(track, probe, kFourth);
  CHECK(ledger.flags == 0);
  CHECK(ledger.skipped == 0);
  CHECK(ledger.entries.size() == track.size());
  const double expect = std::sqrt(2 * pi / std::exp(1.0));
  for (const auto& e : ledger.entries) CHECK(e.value == doctest::Approx(expect).epsilon(1e-6));
  CHECK(ledger.limit == doctest::Approx(expect).epsilon(1e-6));

  // Snapshots at or after an earlier probe time are skipped.
  auto early = monotonicity_ledger(track, DensityProbe{{0.0, 0.0}, 0.3}, kFourth);
  CHECK(early.skipped > 0);
  CHECK(early.entries.size() + early.skipped == track.size());
}

TEST_CASE("ledger flags increases above the slack") {
  // A static circle is not a flow; for t0 - t > 1/2 its density increases in t.
  SpaceTimeTrack track;
  for (int k = 0; k < 5; ++k) track.append(0.1 * k, circle_immersion(1.0, 2, 128));
  DensityProbe probe{{0.0, 0.0}, 1.0};
  auto ledger = monotonicity_ledger(track, probe);
  CHECK(ledger.flags == 4);
  CHECK(ledger.max_increase > 1e-3);
}

TEST_CASE("Richardson extrapolation is exact for polynomials") {
  std::vector<double> x{0.5, 0.4, 0.3, 0.2, 0.1};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 - 3.0 * v + v * v * v * v);
  CHECK(extrapolate_to_zero(x, y) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(extrapolate_to_zero(x, std::span<const double>(y.data(), 3)), ArgumentError);
}

TEST_CASE("parabolic dilation") {
  std::vector<double> y0{0.0, 0.0};
  auto imm = circle_immersion(0.5, 2, 64);
  auto same = parabolic_dilate(imm, y0, 1.0);
  CHECK(same.positions == imm.positions);
  auto big = parabolic_dilate(imm, y0, 4.0);
  CHECK(std::hypot(big.point(0)[0], big.point(0)[1]) == doctest::Approx(2.0));
  CHECK_THROWS_AS(parabolic_dilate(imm, y0, 0.0), ArgumentError);
  CHECK_THROWS_AS(parabolic_dilate(imm, y0, -2.0), ArgumentError);

  // The shrinking circle dilated about its singularity has radius sqrt(-2s).
  std::vector<double> times{0.0, 0.25, 0.375};
  auto track = exact_circle_track(1.0, 2, 64, times);
  DensityProbe probe{{0.0, 0.0}, 0.5};
  auto dil = parabolic_dilate(track, probe, 2.0);
  for (const auto& s : dil) {
    CHECK(s.time == doctest::Approx(4.0 * (times[&s - &dil[0]] - 0.5)));
    CHECK(std::hypot(s.imm.point(0)[0], s.imm.point(0)[1]) == doctest::Approx(std::sqrt(-2 * s.time)));
  }
}

TEST_CASE("density is invariant under parabolic dilation") {
  auto imm = ellipse_immersion(0.9, 0.6, 3, 256);
  DensityProbe probe{{0.1, -0.05, 0.0}, 0.4};
  const double t = 0.1;
  const double base = gaussian_density(imm, t, probe);
  for (double lambda : {0.5, 2.0, 10.0}) {
    auto d = parabolic_dilate(imm, probe.y0, lambda);
    DensityProbe origin{{0.0, 0.0, 0.0}, 0.0};
    const double v = gaussian_density(d, lambda * lambda * (t - probe.t0), origin);
    CHECK(v == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("dilated exact circle is a self-shrinker") {
  std::vector<double> times{0.0, 0.25, 0.4375, 0.4921875};
  auto track = exact_circle_track(1.0, 2, 256, times);
  DensityProbe probe{{0.0, 0.0}, 0.5};
  for (double lambda : {2.0, 8.0, 32.0}) {
    auto dil = parabolic_dilate(track, probe, lambda);
    for (const auto& s : dil) {
      if (std::abs(s.time + 1.0) < 1e-12) CHECK(self_shrinker_residual(s.imm, s.time, kFourth) < 1e-6);
    }
  }
}

TEST_CASE("type-I fit on the exact circle") {
  auto track = exact_circle_track(1.0, 2, 256, 0.01, 0.49);
  auto fit = type1_diagnostic(track);
  // 1/|II|^2 = (1 - 2t) cos^4(h/2) on the discrete circle: exactly linear in t.
  CHECK(fit.t0 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.C == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(fit.window_begin == track.size() - 10);
  for (std::size_t k = fit.window_begin; k < fit.series.size(); ++k)
    CHECK(fit.series[k] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("type-I fit on the exact product torus") {
  auto track = exact_product_torus_track(1.0, 2.0, 64, 64, 0.005, 0.49);
  auto fit = type1_diagnostic(track, kFourth);
  CHECK(fit.t0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("type-I fit fails on a static plane") {
  SpaceTimeTrack track;
  for (int k = 0; k < 12; ++k) track.append(0.1 * k, plane_immersion(2, 3, 8, 1.0));
  CHECK_THROWS_AS(type1_diagnostic(track), FitFailureError);
}

TEST_CASE("heat bound") {
  auto track = exact_circle_track(1.0, 3, 64, 0.1, 0.45);
  CHECK(std::abs(heat_bound_check(track, 1.0)) < 1e-14);
  CHECK(heat_bound_check(track, 2.0) == doctest::Approx(-3.0));
}
