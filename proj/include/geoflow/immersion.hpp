#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace geoflow {

inline constexpr int kMaxAmbientDim = 8;

/// Structured parameter grid for a chart of dimension 1 or 2.
///
/// Periodic axes sample [origin, origin + length) with spacing length / dims.
/// Non-periodic axes sample the closed interval [origin, origin + length) with
/// spacing length / (dims - 1); their end nodes carry Dirichlet data.
struct ParamGrid {
  int n = 1;
  std::array<int, 2> dims{8, 1};
  std::array<double, 2> length{1.0, 1.0};
  std::array<double, 2> origin{0.0, 0.0};
  std::array<bool, 2> periodic{true, true};

  static ParamGrid periodic_1d(int dims, double period);
  static ParamGrid periodic_2d(int dims0, int dims1, double period0, double period1);
  static ParamGrid interval(int dims, double a, double b);

  double spacing(int axis) const;
  double coord(int axis, int i) const { return origin[axis] + i * spacing(axis); }
  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(n == 2 ? dims[1] : 1);
  }
  int dim(int axis) const { return axis < n ? dims[axis] : 1; }
  std::size_t index(int i0, int i1) const {
    return static_cast<std::size_t>(i0) * static_cast<std::size_t>(dim(1)) +
           static_cast<std::size_t>(i1);
  }
  /// Product of spacings over the active axes.
  double cell_volume() const;
  /// Quadrature weight of a node: 1 on periodic axes, trapezoid halves at Dirichlet ends.
  double quadrature_weight(std::size_t point) const;
  bool all_periodic() const { return periodic[0] && (n == 1 || periodic[1]); }

  /// Throws ArgumentError when an invariant is violated.
  void validate() const;

  bool operator==(const ParamGrid&) const = default;
};

enum class AmbientKind : std::uint32_t { euclidean = 0, flat_torus = 1 };

/// Discrete map F from a parameter grid into R^N (or a flat torus, with
/// positions stored unwrapped). Crossing a periodic parameter axis once in
/// the positive direction adds lift[axis] to the position.
struct Immersion {
  ParamGrid grid;
  int ambient_dim = 2;
  AmbientKind ambient = AmbientKind::euclidean;
  std::vector<double> ambient_periods;          // size N, flat torus only
  std::array<std::vector<double>, 2> lift;      // size N each (zero for closed charts)
  std::vector<double> positions;                // point-major, N components per point

  Immersion() = default;
  Immersion(ParamGrid g, int n_ambient);

  std::size_t num_points() const { return grid.size(); }
  std::span<const double> point(std::size_t p) const {
    return {positions.data() + p * static_cast<std::size_t>(ambient_dim),
            static_cast<std::size_t>(ambient_dim)};
  }
  std::span<double> point(std::size_t p) {
    return {positions.data() + p * static_cast<std::size_t>(ambient_dim),
            static_cast<std::size_t>(ambient_dim)};
  }

  /// Same grid, ambient and lifts (what a space-time track requires of its snapshots).
  bool same_layout(const Immersion& other) const;
  void validate() const;

  bool operator==(const Immersion&) const = default;
};

}  // namespace geoflow
