// Serial reference vs OpenMP kernels. Both paths give bit-identical results;
// only the wall time differs.

#include <benchmark/benchmark.h>

#include <cmath>

#include "abesov/ensemble.hpp"
#include "abesov/fractional.hpp"
#include "abesov/harness.hpp"
#include "abesov/quadrature.hpp"

using namespace abesov;

namespace {

Execution exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Execution::serial : Execution::parallel; }

void BM_node_sum(benchmark::State& st) {
    std::vector<double> nodes, weights;
    for (int i = 0; i < 20000; ++i) {
        nodes.push_back(-20.0 + 40.0 * i / 19999.0);
        weights.push_back(40.0 / 19999.0);
    }
    Integrand g = [](double u) {
        Block b(16, 1);
        for (int k = 0; k < 16; ++k) b(k, 0) = std::exp(-u * u * (1 + k)) * Complex(std::cos(u), std::sin(k * u));
        return b;
    };
    for (auto _ : st) benchmark::DoNotOptimize(node_sum(g, nodes, weights, exec_of(st)));
}

void BM_frac_power(benchmark::State& st) {
    Operator a = draw_operator(FamilySpec::spd(static_cast<int>(st.range(1)), 100.0), 3);
    Block x = Block::Ones(a.dim(), 1);
    for (auto _ : st) benchmark::DoNotOptimize(frac_power(a, Complex(0.6, 0.2), x, {}, exec_of(st)).value);
}

void BM_frac_power_nonnormal(benchmark::State& st) {
    Operator a = draw_operator(FamilySpec::nonnormal(static_cast<int>(st.range(1)), 1.0), 5);
    Block x = Block::Ones(a.dim(), 1);
    for (auto _ : st) benchmark::DoNotOptimize(frac_power(a, 0.4, x, {}, exec_of(st)).value);
}

void BM_check_samples(benchmark::State& st) {
    HarnessConfig cfg;
    cfg.jobs = st.range(0) == 0 ? 1 : 0;
    cfg.overrides["alpha_independence"].samples = 8;
    for (auto _ : st) benchmark::DoNotOptimize(run_check("alpha_independence", cfg));
}

}  // namespace

// first argument: 0 serial, 1 parallel
BENCHMARK(BM_node_sum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_frac_power)->Args({0, 16})->Args({1, 16})->Args({0, 32})->Args({1, 32})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_frac_power_nonnormal)->Args({0, 16})->Args({1, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_samples)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
