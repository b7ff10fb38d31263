#include <benchmark/benchmark.h>

#include "orlicz/young.hpp"

namespace {

void bm_conjugate_power(benchmark::State& state) {
  const auto phi = orlicz::YoungFunction::power(3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(orlicz::conjugate(phi, 2.0));
  }
}
BENCHMARK(bm_conjugate_power);

}  // namespace

BENCHMARK_MAIN();
