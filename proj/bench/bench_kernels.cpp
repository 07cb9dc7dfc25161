// Serial vs parallel timings for the OpenMP kernels.

#include "inhibnet/pdmp.hpp"
#include "inhibnet/perfect.hpp"
#include "inhibnet/rng.hpp"
#include "inhibnet/spectral.hpp"
#include "inhibnet/stats.hpp"
#include "support.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace inhibnet;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_DrawStationary(benchmark::State& state) {
    const auto model = test_support::paper_lattice();
    for (auto _ : state) benchmark::DoNotOptimize(draw_stationary(model, 0, 500, 1, 1'000'000, exec_of(state)));
    label(state);
}

void BM_Kde(benchmark::State& state) {
    StreamEngine eng(derive_key(1, {tag(Purpose::Test)}));
    std::vector<double> xs(5000);
    for (double& x : xs) x = eng.uniform();
    for (auto _ : state) benchmark::DoNotOptimize(kde(xs, 512, exec_of(state)));
    label(state);
}

void BM_LeftMultiply(benchmark::State& state) {
    const std::size_t n = 1000;
    StreamEngine eng(derive_key(2, {tag(Purpose::Test)}));
    std::vector<double> h(n * n), v(n), y(n);
    for (double& x : h) x = eng.uniform();
    for (double& x : v) x = eng.uniform();
    for (auto _ : state) {
        left_multiply(h, n, v, y, exec_of(state));
        benchmark::DoNotOptimize(y.data());
    }
    label(state);
}

void BM_FirstJumpTimes(benchmark::State& state) {
    auto model = test_support::finite(1, {DriftSpec::Linear{1.0}}, test_support::paper_rate(),
                                      {ResetSpec::Exponential{1.0}}, {WeightStructure::Explicit{{{0.0}}}});
    model.initial_state = {4.0};
    for (auto _ : state) benchmark::DoNotOptimize(first_accepted_jump_times(model, 20'000, 3, exec_of(state)));
    label(state);
}

} // namespace

BENCHMARK(BM_DrawStationary)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kde)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LeftMultiply)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FirstJumpTimes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
