#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "lsketch/hadamard.hpp"
#include "lsketch/problems.hpp"
#include "lsketch/random.hpp"
#include "lsketch/sketches.hpp"

namespace {

using namespace lsketch;

void BM_FwhtInPlace(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Vector x(n);
    RandomStream rs(1, "bench");
    for (auto& v : x) v = rs.normal();
    for (auto _ : state) {
        fwht_inplace(x);
        benchmark::DoNotOptimize(x.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_FwhtInPlace)->RangeMultiplier(4)->Range(1 << 8, 1 << 20);

void BM_ApplyRhtFull(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const DenseMatrix a = gaussian_matrix(n, 16, 2);
    const SignDiagonal d = sample_signs(n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(apply_rht(a, d));
}
BENCHMARK(BM_ApplyRhtFull)->Arg(1 << 12)->Arg(1 << 16);

void BM_PartialRhtRows(benchmark::State& state) {
    const std::size_t n = std::size_t{1} << 16;
    const auto r = static_cast<std::size_t>(state.range(0));
    const DenseMatrix a = gaussian_matrix(n, 16, 2);
    const SignDiagonal d = sample_signs(n, 3);
    const SamplingPlan plan = draw_sampling_plan(n, r, 4);
    for (auto _ : state) benchmark::DoNotOptimize(partial_rht_rows(a, d, plan.indices));
}
BENCHMARK(BM_PartialRhtRows)->RangeMultiplier(4)->Range(16, 1 << 14);

void BM_DrawSparseProjection(benchmark::State& state) {
    const double q = static_cast<double>(state.range(0)) / 1000.0;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(draw_sparse_projection(128, 1 << 14, q, ++seed));
}
BENCHMARK(BM_DrawSparseProjection)->Arg(5)->Arg(50)->Arg(500);

}  // namespace
