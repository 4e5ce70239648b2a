#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "geoflow/errors.hpp"
#include "geoflow/geometry.hpp"
#include "geoflow/oracles.hpp"

using namespace geoflow;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("shrinking sphere radius") {
  ShrinkingSphereParams circle{1.0, 1, 2};
  CHECK(shrinking_radius(circle, 0.0) == 1.0);
  CHECK(shrinking_radius(circle, 0.375) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(circle.extinction_time() == 0.5);
  CHECK_THROWS_AS(shrinking_radius(circle, 0.5), PastExtinctionError);

  ShrinkingSphereParams sphere{1.0, 2, 3};
  CHECK(sphere.extinction_time() == 0.25);
  CHECK_THROWS_AS(shrinking_radius(sphere, 0.3), PastExtinctionError);
  CHECK(shrinking_radius(sphere, 0.125) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("exact circle track satisfies rho^2 + 2t = r0^2") {
  auto track = exact_circle_track(1.0, 3, 64, 0.05, 0.46);
  REQUIRE(track.size() == 10);
  for (const auto& s : track) {
    for (std::size_t p = 0; p < s.imm.num_points(); ++p) {
      auto x = s.imm.point(p);
      const double rho2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      REQUIRE(std::abs(rho2 + 2 * s.time - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("exact product torus track radii") {
  std::vector<double> times{0.0, 0.25, 0.375};
  auto track = exact_product_torus_track(1.0, 2.0, 16, 16, times);
  auto x = track[1].imm.point(0);
  CHECK(std::hypot(x[0], x[1]) == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::hypot(x[2], x[3]) == doctest::Approx(std::sqrt(3.5)));
  x = track[2].imm.point(5);
  CHECK(std::hypot(x[0], x[1]) == doctest::Approx(0.5));
  CHECK(std::hypot(x[2], x[3]) == doctest::Approx(std::sqrt(3.25)));
  std::vector<double> bad{0.5};
  CHECK_THROWS_AS(exact_product_torus_track(1.0, 2.0, 16, 16, bad), PastExtinctionError);
}

TEST_CASE("grim reaper") {
  CHECK(grim_reaper(0.0, 0.0) == 0.0);
  CHECK(grim_reaper(0.0, 0.7) == doctest::Approx(0.7));
  CHECK(grim_reaper(pi / 3, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(grim_reaper(-pi / 3, 1.0) == doctest::Approx(1.0 + std::log(2.0)));
  CHECK_THROWS_AS(grim_reaper(pi / 2, 0.0), DomainError);
  CHECK_THROWS_AS(grim_reaper(-2.0, 0.0), DomainError);
  // f_t = f_xx / (1 + f_x^2): f_t = 1, f_x = tan x, f_xx = sec^2 x.
  for (double x : {-1.0, -0.3, 0.2, 1.1}) {
    const double fx = std::tan(x), fxx = 1.0 / std::pow(std::cos(x), 2);
    CHECK(fxx / (1 + fx * fx) == doctest::Approx(1.0));
  }
}

TEST_CASE("cadence times") {
  auto t = cadence_times(0.1, 0.35);
  REQUIRE(t.size() == 4);
  CHECK(t[3] == doctest::Approx(0.3));
}

TEST_CASE("self-shrinker residual") {
  SUBCASE("circle of radius sqrt(-2s) is a shrinker") {
    for (double s : {-1.0, -0.25}) {
      auto imm = circle_immersion(std::sqrt(-2 * s), 2, 256);
      CHECK(self_shrinker_residual(imm, s, {StencilOrder::fourth, Exec::parallel}) < 1e-6);
    }
  }
  SUBCASE("plane through the origin") {
    CHECK(self_shrinker_residual(plane_immersion(2, 3, 16, 2.0), -1.0) == 0.0);
  }
  SUBCASE("unit circle at s = -2 misses by 3/4") {
    auto imm = circle_immersion(1.0, 2, 512);
    CHECK(self_shrinker_residual(imm, -2.0, {StencilOrder::fourth, Exec::parallel}) ==
          doctest::Approx(0.75).epsilon(1e-6));
  }
  SUBCASE("shrinking torus is a shrinker in R^4") {
    // Radii sqrt(-2s) for each factor circle.
    auto imm = product_torus_immersion(std::sqrt(2.0), std::sqrt(2.0), 64, 64);
    CHECK(self_shrinker_residual(imm, -1.0, {StencilOrder::fourth, Exec::parallel}) < 1e-4);
  }
  CHECK_THROWS_AS(self_shrinker_residual(circle_immersion(1.0, 2, 32), 0.0), ArgumentError);
}
