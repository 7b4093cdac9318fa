// Serial reference vs OpenMP paths of the circle kernels.
//   ./bench_kernels --benchmark_filter=CircleMean
#include <benchmark/benchmark.h>

#include "qdiff/kernels.hpp"
#include "qdiff/nevanlinna.hpp"

namespace {

using qdiff::Exec;

void circle_mean_bench(benchmark::State& state, Exec exec) {
  const auto model = qdiff::E_q_model(qdiff::QParam(0.5));
  const qdiff::CircleFn phi = [&](qdiff::cplx z) { return model.log_abs(z); };
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qdiff::circle_mean(phi, 1e3, nodes, exec));
  }
  state.SetItemsProcessed(state.iterations() * nodes * 3 / 2);
}

void sweep_bench(benchmark::State& state, Exec exec) {
  const auto model = qdiff::E_q_model(qdiff::QParam(0.5));
  const auto grid =
      qdiff::RadialGrid::log_spaced(1e2, 1e6, static_cast<int>(state.range(0)), 1024).nudged(model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qdiff::sample_sweep(model, grid, exec));
  }
}

void BM_CircleMeanSerial(benchmark::State& s) { circle_mean_bench(s, Exec::serial); }
void BM_CircleMeanParallel(benchmark::State& s) { circle_mean_bench(s, Exec::parallel); }
void BM_SweepSerial(benchmark::State& s) { sweep_bench(s, Exec::serial); }
void BM_SweepParallel(benchmark::State& s) { sweep_bench(s, Exec::parallel); }

}  // namespace

BENCHMARK(BM_CircleMeanSerial)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->UseRealTime();
BENCHMARK(BM_CircleMeanParallel)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Arg(8)->Arg(32)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(8)->Arg(32)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
