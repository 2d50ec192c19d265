#include <benchmark/benchmark.h>

#include "cadyn/debruijn.hpp"
#include "cadyn/equicontinuity.hpp"
#include "cadyn/gilman.hpp"

using namespace cadyn;

static void BM_StepPeriodic(benchmark::State& state) {
    const auto ca = CellularAutomaton::elementary(110);
    Word w(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<Letter>((i * 7 + i / 3) % 2);
    PeriodicConfig x{w, 0};
    for (auto _ : state) {
        x = step(ca, x);
        benchmark::DoNotOptimize(x);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StepPeriodic)->Arg(64)->Arg(1024)->Arg(16384);

static void BM_Surjectivity(benchmark::State& state) {
    for (auto _ : state) {
        for (int code = 0; code < 256; ++code) benchmark::DoNotOptimize(is_surjective(CellularAutomaton::elementary(code)));
    }
}
BENCHMARK(BM_Surjectivity);

static void BM_BlockingScan(benchmark::State& state) {
    const auto ca = CellularAutomaton::elementary(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(scan_blocking_words(ca, 1, 6));
}
BENCHMARK(BM_BlockingScan)->Arg(30)->Arg(204)->Arg(110);

static void BM_EstimateRatio(benchmark::State& state) {
    const auto ca = CellularAutomaton::elementary(30);
    RatioQuery q;
    q.n = 8;
    q.horizon = static_cast<std::size_t>(state.range(0));
    q.samples = 200;
    const Configuration x{PeriodicConfig{{0}, 0}};
    for (auto _ : state) benchmark::DoNotOptimize(estimate_ratio(ca, x, q));
}
BENCHMARK(BM_EstimateRatio)->Arg(32)->Arg(128);
BENCHMARK_MAIN();
