#include <benchmark/benchmark.h>

#include "mppfv/limiters.hpp"
#include "mppfv/time_integration.hpp"

using namespace mppfv;

static void BM_WenoFaceValue(benchmark::State& state) {
  Stencil5 s{{0.1, 0.4, 0.3, 0.9, 0.2}, 0.01};
  for (auto _ : state) {
    benchmark::DoNotOptimize(weno5_face_value(s, Side::Right));
    s.values[2] += 1e-12;
  }
}
BENCHMARK(BM_WenoFaceValue);

static void BM_HighOrderFluxes(benchmark::State& state) {
  const ProblemSpec spec = kpp_2d(0.0);
  const StructuredGrid grid = make_grid(spec, static_cast<int>(state.range(0)));
  const SpatialOperator op(spec, grid);
  const ExtendedField ext = op.extend(initial_field(spec, grid));
  for (auto _ : state) benchmark::DoNotOptimize(op.high_order_fluxes(ext, 0.0));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(op.face_count()));
}
BENCHMARK(BM_HighOrderFluxes)->Arg(32)->Arg(64)->Arg(128);

static void BM_JacobianAssembly(benchmark::State& state) {
  const ProblemSpec spec = solid_rotation_2d();
  const StructuredGrid grid = make_grid(spec, static_cast<int>(state.range(0)));
  const SpatialOperator op(spec, grid);
  const ExtendedField ext = op.extend(initial_field(spec, grid));
  const auto lam = op.wave_speeds(ext, 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_pseudo_jacobian(op, ext, lam, grid.spacing(0), 0.0));
}
BENCHMARK(BM_JacobianAssembly)->Arg(64)->Arg(128);

static void BM_Sdirk5StepBurgers(benchmark::State& state) {
  const ProblemSpec spec = burgers_1d();
  const StructuredGrid grid = make_grid(spec, static_cast<int>(state.range(0)));
  const SpatialOperator op(spec, grid);
  const ImplicitSolver solver(op, {});
  const CellField u = initial_field(spec, grid);
  const ButcherTableau t = sdirk5_tableau();
  for (auto _ : state) benchmark::DoNotOptimize(dirk_step(solver, t, u, 0.0, 0.5 * grid.spacing(0)));
}
BENCHMARK(BM_Sdirk5StepBurgers)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_GmcStepBurgers(benchmark::State& state) {
  const ProblemSpec spec = burgers_1d();
  const StructuredGrid grid = make_grid(spec, static_cast<int>(state.range(0)));
  const SpatialOperator op(spec, grid);
  const CellField u = initial_field(spec, grid);
  const double dt = 0.5 * grid.spacing(0);
  const FaceFluxSet high = op.high_order_fluxes(op.extend(u), dt);
  for (auto _ : state) benchmark::DoNotOptimize(gmc_step(op, u, high, dt, dt, {}));
}
BENCHMARK(BM_GmcStepBurgers)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
