#include <benchmark/benchmark.h>

#include "hevo/inner_loop.hpp"
#include "hevo/meta_loop.hpp"
#include "hevo/simkit.hpp"

using namespace hevo;

static void BM_InnerLoop(benchmark::State& state) {
  auto kind = static_cast<StrategyKind>(state.range(0));
  Blueprint bp = simkit::default_blueprint(kind, state.range(1));
  Task task = simkit::bundled_corpus()[4];
  for (auto _ : state) benchmark::DoNotOptimize(run_inner_loop(task, bp, 1));
}
BENCHMARK(BM_InnerLoop)
    ->Args({static_cast<int>(StrategyKind::random), 20})
    ->Args({static_cast<int>(StrategyKind::hill_climb), 20})
    ->Args({static_cast<int>(StrategyKind::exhaustive), 84})
    ->Unit(benchmark::kMillisecond);

static void BM_Round(benchmark::State& state) {
  Blueprint bp = simkit::default_blueprint(StrategyKind::hill_climb, 12);
  auto tasks = simkit::bundled_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(run_round(tasks, bp, 1, 1, state.range(0)));
}
BENCHMARK(BM_Round)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
