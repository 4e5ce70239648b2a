#pragma once

#include <cmath>
#include <vector>

#include "geoflow/immersion.hpp"

namespace geoflow {

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 diag(double x, double y) { return {x, 0.0, 0.0, y}; }

  double det() const { return a * d - b * c; }
  double frobenius2() const { return a * a + b * b + c * c + d * d; }
  double frobenius() const { return std::sqrt(frobenius2()); }
  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
  bool operator==(const Mat2&) const = default;
};

/// Map x -> linear * x + displacement(x) of the torus R^2 / (L0 Z x L1 Z),
/// with the displacement sampled on a periodic 2-d grid (2 values per point).
struct TorusMap {
  ParamGrid grid;
  Mat2 linear;
  std::vector<double> displacement;

  static TorusMap identity(int dims0, int dims1, double period0 = 1.0, double period1 = 1.0);

  /// Graph immersion x -> (x, f(x)) in R^4 with periodic lifts; flat-torus ambient.
  Immersion graph() const;
  /// Inverse of graph(): reads the linear part from the lifts.
  static TorusMap from_graph(const Immersion& imm);

  void validate() const;
};

}  // namespace geoflow
