#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "zetalab/expsum.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/quadruple.hpp"
#include "zetalab/zeta.hpp"

using namespace zetalab;

static void BM_RiemannSiegel(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0));
    double x = 0.0;
    for (auto _ : state) {
        x += riemann_siegel_z(t + x * 1e-300);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_RiemannSiegel)->Arg(1000)->Arg(100000)->Arg(10000000);

static void BM_EulerMaclaurin(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(zeta_abs2_euler_maclaurin(t));
}
BENCHMARK(BM_EulerMaclaurin)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_MeanSquare(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(integrate_mean_square(1e4, 1e4 + 50.0).value);
}
BENCHMARK(BM_MeanSquare)->Unit(benchmark::kMillisecond);

static void BM_DivisorSieve(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(divisor_sieve(n).raw().data());
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_DivisorSieve)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);

static void BM_ExpSum(benchmark::State& state) {
    const auto K = static_cast<std::uint64_t>(state.range(0));
    ExpSumInstance inst{1e5 + 10.0, 1e5, K, 2 * K, 1e5};
    for (auto _ : state) benchmark::DoNotOptimize(exp_sum_S(inst));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(K));
}
BENCHMARK(BM_ExpSum)->Arg(1 << 8)->Arg(1 << 12)->Arg(1 << 16);

static void BM_ExpSumReference(benchmark::State& state) {
    const auto K = static_cast<std::uint64_t>(state.range(0));
    ExpSumInstance inst{1e5 + 10.0, 1e5, K, 2 * K, 1e5};
    for (auto _ : state) benchmark::DoNotOptimize(exp_sum_S_reference(inst));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(K));
}
BENCHMARK(BM_ExpSumReference)->Arg(1 << 12);

static void BM_DiagonalBruteForce(benchmark::State& state) {
    const auto K = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_diagonal(K, 2 * K).size());
}
BENCHMARK(BM_DiagonalBruteForce)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_DiagonalFamilies(benchmark::State& state) {
    const auto K = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_diagonal_families(K, 2 * K).size());
}
BENCHMARK(BM_DiagonalFamilies)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
