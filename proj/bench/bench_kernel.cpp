#include <benchmark/benchmark.h>

#include "qbessel/identities.hpp"

using namespace qbessel;

static void BM_KernelTableSerial(benchmark::State& state) {
  const QBase q(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_table_serial(1.5, {0, 4}, {0, 4}, {-4, 10}, q));
  }
}
BENCHMARK(BM_KernelTableSerial)->Unit(benchmark::kMillisecond);

static void BM_KernelTableParallel(benchmark::State& state) {
  const QBase q(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_table(1.5, {0, 4}, {0, 4}, {-4, 10}, q));
  }
}
BENCHMARK(BM_KernelTableParallel)->Unit(benchmark::kMillisecond);

static void BM_Corollary43(benchmark::State& state) {
  const ParamMap p{{"q", 0.5}, {"nu", 1.5}, {"t", 0.8}, {"x", 2}, {"z", 1}, {"N", 4}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_identity(IdentityId::Corollary43, p, {}, 1e-8));
  }
}
BENCHMARK(BM_Corollary43)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
