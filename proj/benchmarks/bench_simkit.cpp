#include <benchmark/benchmark.h>

#include "hevo/simkit.hpp"

using namespace hevo;

static void BM_SimExecute(benchmark::State& state) {
  auto space = simkit::HarnessSpace::full();
  auto corpus = simkit::bundled_corpus();
  Harness h = space.at(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (const auto& task : corpus) benchmark::DoNotOptimize(simkit::sim_execute(h, task));
  }
}
BENCHMARK(BM_SimExecute)->Arg(0)->Arg(74)->Arg(371);

static void BM_SimEvaluate(benchmark::State& state) {
  Task task = simkit::bundled_corpus()[4];
  Trace trace = simkit::sim_execute(simkit::baseline_harness(), task);
  for (auto _ : state) benchmark::DoNotOptimize(simkit::sim_evaluate(trace, task));
}
BENCHMARK(BM_SimEvaluate);

static void BM_Oracle(benchmark::State& state) {
  auto space = state.range(0) ? simkit::HarnessSpace::full() : simkit::HarnessSpace::restricted();
  Task task = simkit::bundled_corpus()[static_cast<std::size_t>(state.range(1))];
  for (auto _ : state) benchmark::DoNotOptimize(simkit::brute_force_oracle(task, space));
}
BENCHMARK(BM_Oracle)->Args({0, 0})->Args({0, 9})->Args({1, 9})->Unit(benchmark::kMillisecond);
