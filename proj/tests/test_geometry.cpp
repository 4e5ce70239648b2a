#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "geoflow/errors.hpp"
#include "geoflow/flow.hpp"
#include "geoflow/geometry.hpp"
#include "geoflow/oracles.hpp"

using namespace geoflow;

namespace {

constexpr double pi = std::numbers::pi;

GeometryOptions order4() { return {StencilOrder::fourth, Exec::parallel}; }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// (x, y, f(x, y)) for f = amp * sin(2 pi x) cos(2 pi y) on the unit torus chart.
Immersion wavy_graph(int dims, double amp) {
  auto grid = ParamGrid::periodic_2d(dims, dims, 1.0, 1.0);
  std::vector<double> f(grid.size());
  for (int i = 0; i < dims; ++i)
    for (int j = 0; j < dims; ++j)
      f[grid.index(i, j)] = amp * std::sin(2 * pi * grid.coord(0, i)) * std::cos(2 * pi * grid.coord(1, j));
  return graph_immersion(grid, f);
}

}  // namespace

TEST_CASE("param grid validation and spacing") {
  auto g = ParamGrid::periodic_1d(64, 2 * pi);
  CHECK(g.spacing(0) == doctest::Approx(2 * pi / 64));
  auto iv = ParamGrid::interval(11, -1.0, 1.0);
  CHECK(iv.spacing(0) == doctest::Approx(0.2));
  CHECK(iv.quadrature_weight(0) == 0.5);
  CHECK(iv.quadrature_weight(5) == 1.0);
  CHECK_THROWS_AS(ParamGrid::periodic_1d(4, 1.0).validate(), ArgumentError);
  CHECK_THROWS_AS(ParamGrid::periodic_1d(16, -1.0).validate(), ArgumentError);
}

TEST_CASE("circle metric and curvature") {
  const double r = 1.5;
  const int dims = 256;
  const double h = 2 * pi / dims;
  auto imm = circle_immersion(r, 2, dims);
  auto geom = geometry_fields(imm);
  for (std::size_t p = 0; p < imm.num_points(); p += 17) {
    // The centered difference of (r cos x, r sin x) has length r sin h / h.
    const double expect_g = std::pow(r * std::sin(h) / h, 2);
    CHECK(geom.g(p, 0, 0) == doctest::Approx(expect_g).epsilon(1e-12));
    CHECK(std::abs(geom.g(p, 0, 0) - r * r) <= r * r * h * h);
    CHECK(std::sqrt(geom.norm2_H[p]) == doctest::Approx(1.0 / r).epsilon(h * h));
    CHECK(geom.norm2_II[p] == doctest::Approx(geom.norm2_H[p]).epsilon(1e-12));
    // H points to the center.
    auto H = geom.H(p);
    auto F = imm.point(p);
    CHECK(dot(H, F) < 0.0);
  }
}

TEST_CASE("circle mean curvature matches the closed-form discrete value") {
  // Second differences of r e^{ix} are exactly radial with length r 4 sin^2(h/2) / h^2,
  // first differences have length r sin h / h, hence |H| = 1 / (r cos^2(h/2)).
  for (int dims : {32, 64, 128}) {
    const double r = 0.7;
    const double h = 2 * pi / dims;
    auto geom = geometry_fields(circle_immersion(r, 2, dims));
    const double expect = 1.0 / (r * std::pow(std::cos(h / 2), 2));
    for (std::size_t p = 0; p < geom.points; ++p)
      REQUIRE(std::sqrt(geom.norm2_H[p]) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("second order convergence of |H| on the circle") {
  double prev = 0.0;
  for (int dims : {32, 64, 128, 256}) {
    auto geom = geometry_fields(circle_immersion(1.0, 2, dims));
    const double err = std::abs(std::sqrt(geom.norm2_H[0]) - 1.0);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.02));
    prev = err;
  }
}

TEST_CASE("fourth order convergence of |H| on the circle") {
  double prev = 0.0;
  for (int dims : {16, 32, 64}) {
    auto geom = geometry_fields(circle_immersion(1.0, 2, dims), order4());
    const double err = std::abs(std::sqrt(geom.norm2_H[0]) - 1.0);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(16.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("flat graph is flat") {
  auto grid = ParamGrid::periodic_2d(16, 16, 1.0, 1.0);
  std::vector<double> zero(grid.size(), 0.0);
  auto imm = graph_immersion(grid, zero);
  auto geom = geometry_fields(imm);
  for (std::size_t p = 0; p < geom.points; ++p) {
    CHECK(geom.g(p, 0, 0) == 1.0);
    CHECK(geom.g(p, 0, 1) == 0.0);
    CHECK(geom.g(p, 1, 1) == 1.0);
    CHECK(geom.sqrt_det_g[p] == 1.0);
    CHECK(geom.norm2_II[p] == 0.0);
    CHECK(geom.norm2_H[p] == 0.0);
  }
  CHECK(volume(imm) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("product torus metric and curvature") {
  const double r1 = 1.0, r2 = 2.0;
  const int dims = 128;
  const double h = 2 * pi / dims;
  auto imm = product_torus_immersion(r1, r2, dims, dims);
  auto geom = geometry_fields(imm);
  const double curv = 1 / (r1 * r1) + 1 / (r2 * r2);
  for (std::size_t p = 0; p < geom.points; p += 101) {
    CHECK(geom.g(p, 0, 0) == doctest::Approx(r1 * r1).epsilon(h * h));
    CHECK(geom.g(p, 1, 1) == doctest::Approx(r2 * r2).epsilon(h * h));
    CHECK(std::abs(geom.g(p, 0, 1)) < 1e-14);
    CHECK(geom.norm2_H[p] == doctest::Approx(curv).epsilon(h * h));
    CHECK(geom.norm2_II[p] == doctest::Approx(curv).epsilon(h * h));
  }
  CHECK(volume(imm, order4()) == doctest::Approx(4 * pi * pi * r1 * r2).epsilon(1e-6));
}

TEST_CASE("volume examples") {
  CHECK(volume(circle_immersion(1.0, 2, 512), order4()) == doctest::Approx(2 * pi).epsilon(1e-9));
  CHECK(volume(circle_immersion(2.0, 5, 512), order4()) == doctest::Approx(4 * pi).epsilon(1e-9));
  CHECK(volume(plane_immersion(2, 3, 16, 3.0)) == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("normal projection") {
  SUBCASE("circle: the radial direction is already normal") {
    auto imm = circle_immersion(1.0, 2, 64);
    std::vector<double> v{1.0, 0.0};
    auto n = normal_project(imm, 0, v);
    CHECK(n[0] == doctest::Approx(1.0));
    CHECK(std::abs(n[1]) < 1e-14);
  }
  SUBCASE("circle: the tangent direction projects to zero") {
    auto imm = circle_immersion(1.0, 2, 64);
    std::vector<double> v{0.0, 3.0};
    auto n = normal_project(imm, 0, v);
    CHECK(std::abs(n[0]) < 1e-14);
    CHECK(std::abs(n[1]) < 1e-14);
  }
  SUBCASE("circle in R^3 keeps the out-of-plane part") {
    auto imm = circle_immersion(1.0, 3, 64);
    std::vector<double> v{1.0, 0.0, 1.0};
    auto n = normal_project(imm, 0, v);
    CHECK(n[0] == doctest::Approx(1.0));
    CHECK(std::abs(n[1]) < 1e-14);
    CHECK(n[2] == doctest::Approx(1.0));
  }
  SUBCASE("random vectors on a wavy graph") {
    auto imm = wavy_graph(32, 0.2);
    auto geom = geometry_fields(imm);
    std::mt19937_64 rng(42);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t p = rng() % imm.num_points();
      std::vector<double> v{nd(rng), nd(rng), nd(rng)};
      auto n = normal_project(imm, p, v);
      for (int i = 0; i < 2; ++i) CHECK(std::abs(dot(n, geom.tangent_at(p, i))) < 1e-12);
      auto nn = normal_project(imm, p, n);
      for (int a = 0; a < 3; ++a) CHECK(nn[a] == doctest::Approx(n[a]).epsilon(1e-12));
    }
  }
}

TEST_CASE("per-point invariants on a curved surface") {
  auto imm = wavy_graph(48, 0.15);
  auto geom = geometry_fields(imm);
  for (std::size_t p = 0; p < geom.points; ++p) {
    // g g^-1 = I
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int k = 0; k < 2; ++k) s += geom.g(p, i, k) * geom.g_inv(p, k, j);
        REQUIRE(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
    // II is normal.
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j)
        for (int k = 0; k < 2; ++k) REQUIRE(std::abs(dot(geom.II(p, i, j), geom.tangent_at(p, k))) < 1e-12);
    // H = g^ij II_ij
    for (int a = 0; a < 3; ++a) {
      double tr = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) tr += geom.g_inv(p, i, j) * geom.II(p, i, j)[a];
      REQUIRE(std::abs(tr - geom.H(p)[a]) < 1e-12);
    }
    REQUIRE(geom.norm2_H[p] <= 2.0 * geom.norm2_II[p] * (1 + 1e-12) + 1e-14);
  }
}

TEST_CASE("Laplace-Beltrami on the circle") {
  // On a circle of radius r, Lap cos(x) = -cos(x) / r^2.
  const double r = 2.0;
  for (auto opts : {GeometryOptions{}, order4()}) {
    const int dims = 128;
    auto imm = circle_immersion(r, 2, dims);
    auto geom = geometry_fields(imm, opts);
    std::vector<double> phi(dims);
    for (int i = 0; i < dims; ++i) phi[i] = std::cos(imm.grid.coord(0, i));
    auto lap = laplace_beltrami(imm, geom, phi, opts);
    for (int i = 0; i < dims; ++i) CHECK(lap[i] == doctest::Approx(-phi[i] / (r * r)).epsilon(1e-3).scale(1e-3));
  }
}

TEST_CASE("degenerate metric is rejected") {
  auto imm = circle_immersion(1.0, 2, 32);
  for (double& x : imm.positions) x = 0.0;
  CHECK_THROWS_AS(geometry_fields(imm), DegenerateMetricError);
  CHECK_THROWS_AS(induced_metric(imm), DegenerateMetricError);
}

TEST_CASE("parameter gradient of a linear function is exact") {
  auto grid = ParamGrid::interval(33, -1.0, 1.0);
  std::vector<double> f(grid.size());
  for (int i = 0; i < 33; ++i) f[i] = 3.0 * grid.coord(0, i) - 1.0;
  auto df = parameter_gradient(grid, f);
  for (double d : df) CHECK(d == doctest::Approx(3.0).epsilon(1e-12));
}
