// Serial reference vs OpenMP Monte-Carlo detector kernels.
#include <benchmark/benchmark.h>

#include <cmath>

#include "oobsense/detection.hpp"

namespace {

using namespace oobsense;

const SenseWindow kWindow(1e-3, 6e6);

DetectorParams params() {
  const double gamma = std::pow(10.0, -1.5);
  return {1.0, gamma, threshold_for_false_alarm(0.1, kWindow, 1.0)};
}

void BM_CountH1Serial(benchmark::State& state) {
  const auto p = params();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::count_h1_serial(p, kWindow, true, state.range(0), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0) * kWindow.n_samples());
}

void BM_CountH1Parallel(benchmark::State& state) {
  const auto p = params();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::count_h1_parallel(p, kWindow, true, state.range(0), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0) * kWindow.n_samples());
}

BENCHMARK(BM_CountH1Serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CountH1Parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
