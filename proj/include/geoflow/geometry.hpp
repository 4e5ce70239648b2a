#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "geoflow/immersion.hpp"
#include "geoflow/parallel.hpp"

namespace geoflow {

/// Accuracy order of the centered finite-difference stencils. Non-periodic
/// axes always fall back to second order (one-sided at the end nodes).
enum class StencilOrder { second = 2, fourth = 4 };

struct GeometryOptions {
  StencilOrder order = StencilOrder::second;
  Exec exec = Exec::parallel;
};

/// det g at or below this value means the discrete map is no longer an immersion.
inline constexpr double kDegenerateMetricThreshold = 1e-14;

/// Index of the symmetric pair (i, j) in packed storage: (0,0) -> 0, (0,1) -> 1, (1,1) -> 2.
constexpr int sym_index(int i, int j) { return i == j ? (i == 0 ? 0 : 2) : 1; }

struct MetricFields {
  int n = 1;
  std::size_t points = 0;
  std::vector<double> metric;      // 3 per point, packed symmetric
  std::vector<double> metric_inv;  // 3 per point
  std::vector<double> sqrt_det_g;

  double g(std::size_t p, int i, int j) const { return metric[3 * p + sym_index(i, j)]; }
  double g_inv(std::size_t p, int i, int j) const { return metric_inv[3 * p + sym_index(i, j)]; }
};

/// Per-point extrinsic geometry. The second fundamental form is stored
/// ambient-valued (one N-vector per symmetric index pair); frame components
/// are never stored.
struct GeometryFields {
  int n = 1;
  int ambient_dim = 2;
  std::size_t points = 0;
  std::vector<double> tangent;            // n * N per point
  std::vector<double> metric;             // 3 per point
  std::vector<double> metric_inv;         // 3 per point
  std::vector<double> sqrt_det_g;
  std::vector<double> second_form;        // 3 * N per point
  std::vector<double> mean_curvature;     // N per point
  std::vector<double> norm2_II;
  std::vector<double> norm2_H;
  std::vector<double> christoffel_trace;  // n per point: g^ij Gamma^k_ij

  std::span<const double> tangent_at(std::size_t p, int i) const {
    const auto N = static_cast<std::size_t>(ambient_dim);
    return {tangent.data() + (p * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)) * N, N};
  }
  std::span<const double> II(std::size_t p, int i, int j) const {
    const auto N = static_cast<std::size_t>(ambient_dim);
    return {second_form.data() + (3 * p + static_cast<std::size_t>(sym_index(i, j))) * N, N};
  }
  std::span<const double> H(std::size_t p) const {
    const auto N = static_cast<std::size_t>(ambient_dim);
    return {mean_curvature.data() + p * N, N};
  }
  double g(std::size_t p, int i, int j) const { return metric[3 * p + sym_index(i, j)]; }
  double g_inv(std::size_t p, int i, int j) const { return metric_inv[3 * p + sym_index(i, j)]; }
};

/// g_ij = <dF/dx^i, dF/dx^j> with its inverse and area element.
/// Throws DegenerateMetricError if det g <= 1e-14 anywhere.
MetricFields induced_metric(const Immersion& imm, const GeometryOptions& opts = {});

/// V - <V, dF/dx^k> g^kl dF/dx^l at one grid point.
std::vector<double> normal_project(const Immersion& imm, std::size_t point,
                                   std::span<const double> v, const GeometryOptions& opts = {});

GeometryFields geometry_fields(const Immersion& imm, const GeometryOptions& opts = {});

/// Mean curvature vectors only (N per point); the hot path of the flow stages.
std::vector<double> mean_curvature_field(const Immersion& imm, const GeometryOptions& opts = {});

/// Quadrature of sqrt(det g) over the chart.
double volume(const Immersion& imm, const GeometryOptions& opts = {});

/// Sum over points of values[p] * sqrt_det_g[p] * quadrature weight * cell volume.
/// Summation order is fixed, so the result does not depend on the thread count.
double integrate(const ParamGrid& grid, std::span<const double> sqrt_det_g,
                 std::span<const double> values);

/// Parameter-space gradient of a scalar grid function (n values per point).
std::vector<double> parameter_gradient(const ParamGrid& grid, std::span<const double> field,
                                       const GeometryOptions& opts = {});

/// Discrete Laplace-Beltrami operator of the induced metric applied to a
/// scalar field: g^ij d_ij phi - g^ij Gamma^k_ij d_k phi.
std::vector<double> laplace_beltrami(const Immersion& imm, const GeometryFields& geom,
                                     std::span<const double> field,
                                     const GeometryOptions& opts = {});

}  // namespace geoflow
