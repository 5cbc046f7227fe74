// Serial reference kernel against the OpenMP driver on the same grid.
// Both produce identical tallies; only wall time differs.

#include <benchmark/benchmark.h>

#include "nifront/sim.hpp"

namespace {

using namespace nifront;

void run(benchmark::State& state, Execution exec) {
    const ScenarioSpec s = scenario_preset("base", Scale::RiskDifference);
    const Procedure proc{ProcedureTag::ModifySmall, AlphaStrategy::nominal(0.025)};
    const std::vector<double> grid = default_grid();
    GridOptions opt;
    opt.execution = exec;
    opt.threads = static_cast<int>(state.range(1));
    const std::int64_t reps = state.range(0);
    for (auto _ : state) {
        auto rows = run_grid(s, proc, Hypothesis::Null, grid, reps, 1, opt);
        benchmark::DoNotOptimize(rows);
    }
    state.SetItemsProcessed(state.iterations() * reps * static_cast<std::int64_t>(grid.size()));
}

void BM_GridSerial(benchmark::State& state) { run(state, Execution::Serial); }
void BM_GridParallel(benchmark::State& state) { run(state, Execution::Parallel); }

}  // namespace

BENCHMARK(BM_GridSerial)->Args({20000, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Args({20000, 1})->Args({20000, 2})->Args({20000, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
