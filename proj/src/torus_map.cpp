#include "geoflow/torus_map.hpp"

#include "geoflow/errors.hpp"

namespace geoflow {

TorusMap TorusMap::identity(int dims0, int dims1, double period0, double period1) {
  TorusMap m;
  m.grid = ParamGrid::periodic_2d(dims0, dims1, period0, period1);
  m.displacement.assign(m.grid.size() * 2, 0.0);
  return m;
}

void TorusMap::validate() const {
  grid.validate();
  if (grid.n != 2 || !grid.all_periodic()) throw ArgumentError("torus maps need a periodic 2-d grid");
  if (displacement.size() != grid.size() * 2) throw ArgumentError("displacement size mismatch");
}

Immersion TorusMap::graph() const {
  validate();
  Immersion imm(grid, 4);
  imm.ambient = AmbientKind::flat_torus;
  const double L0 = grid.length[0];
  const double L1 = grid.length[1];
  imm.ambient_periods = {L0, L1, L0, L1};
  imm.lift[0] = {L0, 0.0, linear.a * L0, linear.c * L0};
  imm.lift[1] = {0.0, L1, linear.b * L1, linear.d * L1};
  for (int i0 = 0; i0 < grid.dims[0]; ++i0) {
    for (int i1 = 0; i1 < grid.dims[1]; ++i1) {
      const std::size_t p = grid.index(i0, i1);
      const double x = grid.coord(0, i0);
      const double y = grid.coord(1, i1);
      auto F = imm.point(p);
      F[0] = x;
      F[1] = y;
      F[2] = linear.a * x + linear.b * y + displacement[2 * p];
      F[3] = linear.c * x + linear.d * y + displacement[2 * p + 1];
    }
  }
  return imm;
}

TorusMap TorusMap::from_graph(const Immersion& imm) {
  if (imm.grid.n != 2 || imm.ambient_dim != 4 || !imm.grid.all_periodic()) {
    throw ArgumentError("not a torus-map graph immersion");
  }
  TorusMap m;
  m.grid = imm.grid;
  const double L0 = imm.grid.length[0];
  const double L1 = imm.grid.length[1];
  m.linear = {imm.lift[0][2] / L0, imm.lift[1][2] / L1, imm.lift[0][3] / L0, imm.lift[1][3] / L1};
  m.displacement.assign(m.grid.size() * 2, 0.0);
  for (std::size_t p = 0; p < m.grid.size(); ++p) {
    const auto F = imm.point(p);
    m.displacement[2 * p] = F[2] - (m.linear.a * F[0] + m.linear.b * F[1]);
    m.displacement[2 * p + 1] = F[3] - (m.linear.c * F[0] + m.linear.d * F[1]);
  }
  return m;
}

}  // namespace geoflow
