// Serial reference vs OpenMP path for the per-point kernels.
#include <benchmark/benchmark.h>

#include "geoflow/flow.hpp"
#include "geoflow/geometry.hpp"
#include "geoflow/oracles.hpp"
#include "geoflow/symplectic.hpp"

namespace {

using geoflow::Exec;

geoflow::Immersion torus_graph(int dims) {
  const geoflow::Shear shears[] = {{0, 0.1, 1.0}, {1, 0.1, 1.0}};
  return geoflow::make_area_preserving_map(shears, dims, dims).map.graph();
}

void geometry_fields(benchmark::State& state, Exec exec) {
  const auto imm = torus_graph(static_cast<int>(state.range(0)));
  geoflow::GeometryOptions opts;
  opts.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(geoflow::geometry_fields(imm, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(imm.num_points()));
}

void mean_curvature(benchmark::State& state, Exec exec) {
  const auto imm = geoflow::circle_immersion(1.0, 3, static_cast<int>(state.range(0)));
  geoflow::GeometryOptions opts;
  opts.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(geoflow::mean_curvature_field(imm, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(imm.num_points()));
}

void rk4_step(benchmark::State& state, Exec exec) {
  geoflow::FlowState s;
  s.imm = geoflow::product_torus_immersion(1.0, 2.0, static_cast<int>(state.range(0)),
                                           static_cast<int>(state.range(0)));
  geoflow::GeometryOptions opts;
  opts.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(geoflow::mcf_step_parametric(s, 1e-5, opts));
}

}  // namespace

BENCHMARK_CAPTURE(geometry_fields, serial, Exec::serial)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK_CAPTURE(geometry_fields, parallel, Exec::parallel)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK_CAPTURE(mean_curvature, serial, Exec::serial)->Arg(1024)->Arg(16384);
BENCHMARK_CAPTURE(mean_curvature, parallel, Exec::parallel)->Arg(1024)->Arg(16384);
BENCHMARK_CAPTURE(rk4_step, serial, Exec::serial)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(rk4_step, parallel, Exec::parallel)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
