#include "nrmb/sweep.hpp"

#include <benchmark/benchmark.h>

namespace {

nrmb::SweepSpec bench_spec() {
    nrmb::SweepSpec s;
    s.axes = {{"gamma_diss", 1.0, 9.0, 5}, {"delta", -20.0, 20.0, 21}};
    return s;
}

void BM_SweepSerial(benchmark::State& state) {
    const auto spec = bench_spec();
    for (auto _ : state) benchmark::DoNotOptimize(nrmb::run_sweep_serial(spec));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(spec.grid_size() * spec.passes()));
}

void BM_SweepOpenMP(benchmark::State& state) {
    const auto spec = bench_spec();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(nrmb::run_sweep(spec, threads));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(spec.grid_size() * spec.passes()));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepOpenMP)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
