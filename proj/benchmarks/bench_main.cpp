#include <benchmark/benchmark.h>

#include "slitfano/spectra.hpp"

using namespace slitfano;

namespace {

const PhysicalConfig kFigure{1.0, 0.4, 0.05};

void BM_BetaConstants(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(beta_constants({2.0, 0.1}, kFigure));
}
BENCHMARK(BM_BetaConstants);

void BM_LineSum(benchmark::State& state) {
    double x = 0.013;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rayleigh_line_sum({2.0, 0.1}, kFigure, x));
        x += 1e-9;
    }
}
BENCHMARK(BM_LineSum);

void BM_Discretization(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const Discretization D(kFigure, 0.1, N);
        benchmark::DoNotOptimize(D.blocks(2.0));
    }
}
BENCHMARK(BM_Discretization)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_DirectSolve(benchmark::State& state) {
    const Discretization D(kFigure, 0.1, static_cast<int>(state.range(0)));
    double k = 2.8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(D.solve(k));
        k += 1e-7;
    }
}
BENCHMARK(BM_DirectSolve)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

// the static operator behind alpha; alpha itself is memoized
void BM_StaticKernel(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(single_layer_matrix(N));
}
BENCHMARK(BM_StaticKernel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FindResonancesHat(benchmark::State& state) {
    ResonanceSearch rs;
    rs.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(find_resonances(kFigure, 0.1, 1, false, rs));
}
BENCHMARK(BM_FindResonancesHat)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
