#include <benchmark/benchmark.h>
#include <omp.h>

#include "shs6v/duality.hpp"
#include "shs6v/kernels.hpp"

using namespace shs6v;

static void BM_KernelTable(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const int span = int(state.range(1));
  ModelParams p = ModelParams::make(1.3, 3, 2, -0.2);
  for (auto _ : state) {
    TwoParticleKernel k(p, 4, 0, span, 0.0, parallel);
    benchmark::DoNotOptimize(k(span, span, 0, 0));
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}
BENCHMARK(BM_KernelTable)->Args({0, 16})->Args({1, 16})->Args({0, 32})->Args({1, 32})->Unit(benchmark::kMillisecond);

static void BM_DualityMonteCarlo(benchmark::State& state) {
  const int threads = state.range(0) == 0 ? 1 : omp_get_max_threads();
  ModelParams p = ModelParams::make(2.0, 2, 1, -0.2);
  DualityQuery q;
  q.mode = DualityMode::G;
  q.method = DualityMethod::MonteCarlo;
  q.initial.values = {1, 0, 2, 1, 0};
  q.initial.base = -4;
  q.x = {2, 3};
  q.steps = 2;
  q.replicas = 200000;
  omp_set_num_threads(threads);
  for (auto _ : state) benchmark::DoNotOptimize(verify_duality(p, q).lhs);
  state.SetLabel(std::to_string(threads) + " thread(s)");
}
BENCHMARK(BM_DualityMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
