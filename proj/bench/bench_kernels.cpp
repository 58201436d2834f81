// Serial reference vs OpenMP kernels. Both produce bit-identical results;
// only the wall time differs.

#include <benchmark/benchmark.h>

#include <cmath>

#include "fbplab/grid.hpp"
#include "fbplab/kernels.hpp"
#include "fbplab/waves.hpp"

namespace {

using fbp::mc::Exec;

void BM_KilledPaths(benchmark::State& state) {
    const auto exec = static_cast<Exec>(state.range(0));
    const fbp::InitialCondition ic = fbp::Wave{fbp::waves::kSqrt2};
    const auto front = fbp::linear_front(0.0, fbp::waves::kSqrt2, 2.0, 0.01);
    const double checkpoints[] = {1.0, 2.0};
    for (auto _ : state) {
        auto run = fbp::mc::killed_paths(ic, front, checkpoints, 20000, 1e-3, true, 5, exec);
        benchmark::DoNotOptimize(run.alive.data());
    }
    state.SetLabel(exec == Exec::Serial ? "serial" : "openmp");
}

void BM_FeynmanKac(benchmark::State& state) {
    const auto exec = static_cast<Exec>(state.range(0));
    const fbp::InitialCondition ic = fbp::Heaviside{};
    const auto front = fbp::linear_front(0.0, 1.0, 1.0, 0.01);
    for (auto _ : state) {
        auto r = fbp::mc::feynman_kac_paths(ic, front, 1.0, 0.5, 20000, 1e-3, 5, exec);
        benchmark::DoNotOptimize(r.mean);
    }
    state.SetLabel(exec == Exec::Serial ? "serial" : "openmp");
}

}  // namespace

BENCHMARK(BM_KilledPaths)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeynmanKac)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
