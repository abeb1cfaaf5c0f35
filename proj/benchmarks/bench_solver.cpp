#include <benchmark/benchmark.h>

#include <vector>

#include "fracar/caputo.hpp"
#include "fracar/roe_flux.hpp"
#include "fracar/scenario.hpp"

namespace {

using namespace fracar;

// Memory sum over k stored steps of 100 cells.
void BM_MemoryTerm(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  HistoryBuffer history(100);
  std::vector<Vec4> inc(100, Vec4{{1e-3, 2e-3, -1e-3, 5e-4}});
  for (std::size_t j = 0; j < k; ++j) history.append(inc);
  std::vector<Vec4> out(100);
  std::vector<double> weights;
  for (auto _ : state) {
    memory_term(history, 0.8, out, weights);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k) * 100);
}
BENCHMARK(BM_MemoryTerm)->Arg(100)->Arg(600)->Arg(1200);

void BM_NumericalFlux(benchmark::State& state) {
  Setup s;
  s.scenario.kind = ScenarioKind::congestion;
  const Closures cl = s.closures();
  const GridState g = initial_grid(s).grid;
  for (auto _ : state) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      benchmark::DoNotOptimize(numerical_flux(g.cells[i], g.cells[(i + 1) % g.size()], cl));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_NumericalFlux);

// Full 60 s run at the calibration grid.
void BM_FullRun(benchmark::State& state) {
  Setup s;
  s.scenario.kind = ScenarioKind::congestion;
  s.sim.alpha = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_setup(s).final_state.cells.data());
  }
}
BENCHMARK(BM_FullRun)->Arg(10)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
