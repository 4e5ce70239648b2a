#pragma once

// Finite-difference machinery shared by the geometry and flow kernels.

#include <array>
#include <cstddef>
#include <vector>

#include "geoflow/geometry.hpp"
#include "geoflow/immersion.hpp"

namespace geoflow::detail {

struct AxisStencil {
  int count = 0;
  std::array<int, 5> offset{};
  std::array<double, 5> weight{};  // already scaled by 1/h or 1/h^2
};

struct NodeStencil {
  AxisStencil first;
  AxisStencil second;
};

class StencilTable {
 public:
  StencilTable(const ParamGrid& grid, StencilOrder order);

  const NodeStencil& at(int axis, int i) const {
    return grid_.periodic[axis] ? nodes_[axis][0] : nodes_[axis][static_cast<std::size_t>(i)];
  }
  const ParamGrid& grid() const { return grid_; }

 private:
  ParamGrid grid_;
  std::array<std::vector<NodeStencil>, 2> nodes_;
};

struct Derivs {
  std::array<std::array<double, kMaxAmbientDim>, 2> first{};
  std::array<std::array<double, kMaxAmbientDim>, 3> second{};  // packed (00, 01, 11)
};

/// Vector-valued field view: comps values per point, plus the jump added
/// when a periodic axis is crossed in the positive direction (nullptr = none).
struct FieldView {
  const double* data = nullptr;
  int comps = 1;
  const double* lift0 = nullptr;
  const double* lift1 = nullptr;
};

inline FieldView view_of(const Immersion& imm) {
  return {imm.positions.data(), imm.ambient_dim, imm.lift[0].data(), imm.lift[1].data()};
}

/// Centered (or one-sided, at Dirichlet ends) first and second derivatives at a node.
void point_derivatives(const StencilTable& st, const FieldView& f, std::size_t p, Derivs& d);

/// Result of the pointwise metric computation.
struct PointMetric {
  double g[3]{};
  double ginv[3]{};
  double det = 0.0;
};

inline double packed(const double* s, int i, int j) { return s[sym_index(i, j)]; }

void point_metric(int n, int N, const Derivs& d, PointMetric& m);

/// In-place normal projection of v against the tangents held in d.
void project_normal(int n, int N, const Derivs& d, const PointMetric& m, double* v);

/// Lowest failing point index, or npos when every det exceeds the threshold.
std::size_t first_degenerate(const std::vector<double>& det);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Mean curvature vector per point (and tangents when requested). Throws DegenerateMetricError.
void mean_curvature_kernel(const Immersion& imm, const GeometryOptions& opts,
                           std::vector<double>& H, std::vector<double>* tangents);

}  // namespace geoflow::detail
