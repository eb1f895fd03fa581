#include <benchmark/benchmark.h>

#include <cstdint>

#include "lsketch/linalg.hpp"
#include "lsketch/problems.hpp"
#include "lsketch/solver.hpp"

namespace {

using namespace lsketch;

LsProblem bench_problem(std::size_t n, std::size_t d) {
    return gen_problem({ProblemKind::GaussianIncoherent, n, d, 10.0, 0.9, 7});
}

void BM_ExactQr(benchmark::State& state) {
    const LsProblem p = bench_problem(static_cast<std::size_t>(state.range(0)), 30);
    for (auto _ : state) benchmark::DoNotOptimize(solve_exact_ls(p.a(), p.b()));
}
BENCHMARK(BM_ExactQr)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

void BM_SamplingSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const LsProblem p = bench_problem(n, 30);
    const SketchParams params = practical_params(n, 30, 0.5);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sketch_solve_sampling(p, params, ++seed));
    state.counters["r"] = static_cast<double>(params.r);
}
BENCHMARK(BM_SamplingSolve)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

void BM_ProjectionSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const LsProblem p = bench_problem(n, 30);
    SketchParams params = practical_params(n, 30, 0.5);
    params.q = 0.05;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sketch_solve_projection(p, params, ++seed));
    state.counters["k"] = static_cast<double>(params.k);
}
BENCHMARK(BM_ProjectionSolve)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

}  // namespace
