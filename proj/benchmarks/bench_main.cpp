#include <benchmark/benchmark.h>

#include "wkam/fixtures.hpp"
#include "wkam/minplus.hpp"
#include "wkam/weakkam.hpp"

namespace {

void BM_AssembleKernel(benchmark::State& state) {
  const auto spec = wkam::fixtures::pendulum();
  const wkam::TorusGrid grid(1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wkam::assemble_kernel(spec, grid, {0.5, 2, 8}, {static_cast<unsigned>(state.range(1))}));
  }
}
BENCHMARK(BM_AssembleKernel)->Args({128, 1})->Args({256, 1})->Args({256, 4})->Unit(benchmark::kMillisecond);

void BM_MinPlusProduct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  wkam::MinPlusMatrix a(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<double>((i * 31 + j * 17) % 97) / 97.0;
  for (auto _ : state) benchmark::DoNotOptimize(wkam::min_plus_product(a, a, {static_cast<unsigned>(state.range(1))}));
}
BENCHMARK(BM_MinPlusProduct)->Args({256, 1})->Args({256, 4})->Args({512, 4})->Unit(benchmark::kMillisecond);

void BM_Karp(benchmark::State& state) {
  const auto k = wkam::assemble_kernel(wkam::fixtures::pendulum(), wkam::TorusGrid(1, static_cast<int>(state.range(0))),
                                       {0.5, 2, 8}, {4});
  for (auto _ : state) benchmark::DoNotOptimize(wkam::karp_min_mean_cycle(k));
}
BENCHMARK(BM_Karp)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PeierlsBarrier(benchmark::State& state) {
  const auto spec = wkam::fixtures::pendulum();
  const auto k = wkam::assemble_kernel(spec, wkam::TorusGrid(1, static_cast<int>(state.range(0))), {0.5, 2, 8}, {4});
  const double c = wkam::critical_value(k, spec).c;
  wkam::BarrierOptions opts;
  opts.exec.threads = 4;
  for (auto _ : state) benchmark::DoNotOptimize(wkam::peierls_barrier(k, c, opts));
}
BENCHMARK(BM_PeierlsBarrier)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
