// OpenMP kernels against their serial references. Arg(0) = serial, Arg(1) = parallel.

#include "generators.hpp"

#include "polyton/covers.hpp"
#include "polyton/cutnorm.hpp"
#include "polyton/lp.hpp"
#include "polyton/sampling.hpp"
#include "polyton/structure.hpp"

#include <benchmark/benchmark.h>

using namespace polyton;
using namespace polyton::testing;

namespace {

StepGraphon dense_graphon(std::size_t blocks, std::uint64_t seed)
{
    Rng rng(seed);
    return random_graphon(rng, blocks, 0.2);
}

void BM_Density(benchmark::State& state)
{
    const auto w = dense_graphon(8, 1);
    const auto f = FiniteGraph::cycle(7);
    for (auto _ : state)
        benchmark::DoNotOptimize(state.range(0) ? density(f, w) : density_serial(f, w));
}

void BM_CutNorm(benchmark::State& state)
{
    Rng rng(2);
    const auto f = random_kernel(rng, 18, 18);
    for (auto _ : state)
        benchmark::DoNotOptimize(state.range(0) ? cut_norm(f) : cut_norm_serial(f));
}

void BM_VertexEnumeration(benchmark::State& state)
{
    const auto lp = cover_polytope(dense_graphon(6, 3));
    for (auto _ : state)
        benchmark::DoNotOptimize(state.range(0) ? lp::enumerate_vertices(lp) : lp::enumerate_vertices_serial(lp));
}

void BM_HalfIntegralGrid(benchmark::State& state)
{
    const auto w = dense_graphon(9, 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(state.range(0) ? half_integral_vertices(w) : half_integral_vertices_serial(w));
}

void BM_IntegralCovers(benchmark::State& state)
{
    const auto w = dense_graphon(10, 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(state.range(0) ? integral_covers(w) : integral_covers_serial(w));
}

void BM_Convergence(benchmark::State& state)
{
    const auto w = dense_graphon(3, 6);
    const std::vector<std::size_t> ns{100};
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8};
    for (auto _ : state)
        benchmark::DoNotOptimize(state.range(0) ? convergence_experiment(w, ns, seeds)
                                                : convergence_experiment_serial(w, ns, seeds));
}

}  // namespace

BENCHMARK(BM_Density)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CutNorm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VertexEnumeration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HalfIntegralGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegralCovers)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Convergence)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
