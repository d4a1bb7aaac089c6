#include <benchmark/benchmark.h>

#include "coarsekit/constructions.hpp"

using namespace coarsekit;

namespace {

PointSet grid_1d(int radius) {
    return sample_grid(QuasiNormedSpace::make(1, 2.0), radius, 1.0);
}

void BM_DistanceKernel(benchmark::State& state) {
    auto g = grid_1d(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(distance_kernel(g));
}
BENCHMARK(BM_DistanceKernel)->Arg(25)->Arg(100);

void BM_NegativeDefiniteCheck(benchmark::State& state) {
    auto N = distance_kernel(grid_1d(static_cast<int>(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(is_negative_definite(N, 1e-9));
}
BENCHMARK(BM_NegativeDefiniteCheck)->Arg(25)->Arg(100);

void BM_FeatureMap(benchmark::State& state) {
    auto N = distance_kernel(grid_1d(static_cast<int>(state.range(0))));
    auto K = pd_from_nd(N, N.labels.front());
    for (auto _ : state)
        benchmark::DoNotOptimize(feature_map_from_pd(K, 1e-8));
}
BENCHMARK(BM_FeatureMap)->Arg(25)->Arg(100);

void BM_EmpiricalModuli(benchmark::State& state) {
    auto g = grid_1d(static_cast<int>(state.range(0)));
    auto ms = evaluate_map(g, gaussian_sphere_model().as_sqdist(), 1e-8);
    auto pairs = ms.pairs();
    std::vector<double> ts;
    for (int t = 1; t <= 10; ++t) ts.push_back(t);
    for (auto _ : state)
        benchmark::DoNotOptimize(empirical_moduli(pairs, ts));
}
BENCHMARK(BM_EmpiricalModuli)->Arg(25)->Arg(100);

void BM_Pipeline(benchmark::State& state) {
    auto s = QuasiNormedSpace::make(1, 2.0);
    auto g = sample_grid(s, static_cast<int>(state.range(0)), 1.0);
    auto sq = gaussian_sphere_model().as_sqdist();
    PipelineConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            pipeline_coarse_to_strong_uniform(s, g, sq, cfg));
}
BENCHMARK(BM_Pipeline)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
