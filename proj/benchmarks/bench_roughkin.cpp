#include <benchmark/benchmark.h>

#include <vector>

#include "roughkin/characteristics.hpp"
#include "roughkin/coefficients.hpp"
#include "roughkin/kinetic.hpp"
#include "roughkin/rough_path.hpp"

using namespace roughkin;

namespace {

void BM_BrownianLift(benchmark::State& state) {
  const TimeGrid grid(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_brownian_lift(2, grid, 16, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BrownianLift)->Arg(256)->Arg(1024);

void BM_CheckDefects(benchmark::State& state) {
  const auto rp = sample_brownian_lift(2, TimeGrid(0.0, 1.0, static_cast<std::size_t>(state.range(0))), 16, 1);
  for (auto _ : state) benchmark::DoNotOptimize(check_defects(rp));
}
BENCHMARK(BM_CheckDefects)->Arg(256)->Arg(1024);

void BM_InverseFlowStep(benchmark::State& state) {
  ModelParams p;
  p.c_period = 1.0;
  const auto f = assemble_characteristic_fields(make_model("modulated_burgers", p));
  const auto rp = sample_brownian_lift(1, TimeGrid(0.0, 1.0, 256), 16, 2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const PhaseGrid grid(n, n, 1.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_flow(f.unforced, rp, 0.0, 1.0 / 256, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_InverseFlowStep)->Arg(32)->Arg(64);

void BM_BgkStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PhaseGrid grid(n, n, 1.0, 2.0);
  const auto f = assemble_characteristic_fields(make_model("burgers"));
  const auto rp = sample_brownian_lift(1, TimeGrid(0.0, 1.0, 256), 16, 3);
  const FlowField psi = inverse_flow(f.unforced, rp, 0.0, 1.0 / 256, grid);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = grid.x(i) < 0.5 ? 1.0 : 0.0;
  const KineticState s = equilibrium(grid, u);
  for (auto _ : state) benchmark::DoNotOptimize(bgk_step(s, psi, 1.0 / 64, 1.0 / 256));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_BgkStep)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
