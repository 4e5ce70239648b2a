#include "geoflow/immersion.hpp"

#include <cmath>
#include <string>

#include "geoflow/errors.hpp"

namespace geoflow {

ParamGrid ParamGrid::periodic_1d(int dims, double period) {
  ParamGrid g;
  g.n = 1;
  g.dims = {dims, 1};
  g.length = {period, 1.0};
  g.periodic = {true, true};
  g.validate();
  return g;
}

ParamGrid ParamGrid::periodic_2d(int dims0, int dims1, double period0, double period1) {
  ParamGrid g;
  g.n = 2;
  g.dims = {dims0, dims1};
  g.length = {period0, period1};
  g.periodic = {true, true};
  g.validate();
  return g;
}

ParamGrid ParamGrid::interval(int dims, double a, double b) {
  ParamGrid g;
  g.n = 1;
  g.dims = {dims, 1};
  g.length = {b - a, 1.0};
  g.origin = {a, 0.0};
  g.periodic = {false, true};
  g.validate();
  return g;
}

double ParamGrid::spacing(int axis) const {
  if (axis >= n) return 1.0;
  return periodic[axis] ? length[axis] / dims[axis] : length[axis] / (dims[axis] - 1);
}

double ParamGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < n; ++a) v *= spacing(a);
  return v;
}

double ParamGrid::quadrature_weight(std::size_t point) const {
  double w = 1.0;
  const int i1 = n == 2 ? static_cast<int>(point % static_cast<std::size_t>(dims[1])) : 0;
  const int i0 = n == 2 ? static_cast<int>(point / static_cast<std::size_t>(dims[1]))
                        : static_cast<int>(point);
  const std::array<int, 2> idx{i0, i1};
  for (int a = 0; a < n; ++a) {
    if (!periodic[a] && (idx[a] == 0 || idx[a] == dims[a] - 1)) w *= 0.5;
  }
  return w;
}

void ParamGrid::validate() const {
  if (n != 1 && n != 2) throw ArgumentError("parameter dimension must be 1 or 2");
  for (int a = 0; a < n; ++a) {
    if (dims[a] < 8) {
      throw ArgumentError("grid axis " + std::to_string(a) + " has fewer than 8 points");
    }
    if (!(length[a] > 0.0) || !std::isfinite(length[a])) {
      throw ArgumentError("grid axis " + std::to_string(a) + " has nonpositive length");
    }
  }
}

Immersion::Immersion(ParamGrid g, int n_ambient) : grid(g), ambient_dim(n_ambient) {
  const auto N = static_cast<std::size_t>(n_ambient);
  lift[0].assign(N, 0.0);
  lift[1].assign(N, 0.0);
  positions.assign(grid.size() * N, 0.0);
}

bool Immersion::same_layout(const Immersion& other) const {
  return grid == other.grid && ambient_dim == other.ambient_dim && ambient == other.ambient &&
         ambient_periods == other.ambient_periods && lift == other.lift;
}

void Immersion::validate() const {
  grid.validate();
  if (ambient_dim < grid.n + 1 || ambient_dim > kMaxAmbientDim) {
    throw ArgumentError("ambient dimension must satisfy n + 1 <= N <= " +
                        std::to_string(kMaxAmbientDim));
  }
  const auto N = static_cast<std::size_t>(ambient_dim);
  if (positions.size() != grid.size() * N) throw ArgumentError("position array size mismatch");
  if (lift[0].size() != N || lift[1].size() != N) throw ArgumentError("lift size mismatch");
  if (ambient == AmbientKind::flat_torus && ambient_periods.size() != N) {
    throw ArgumentError("flat torus ambient needs one period per coordinate");
  }
  for (double x : positions) {
    if (!std::isfinite(x)) throw ArgumentError("non-finite position");
  }
}

}  // namespace geoflow
