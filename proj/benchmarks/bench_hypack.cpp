// Throughput of the hot paths: distances, tile location, orbit queries,
// rationalization and fundamental-domain averaging.

#include <benchmark/benchmark.h>

#include "hypack/branched.hpp"
#include "hypack/packing.hpp"
#include "hypack/sampling.hpp"
#include "hypack/shift.hpp"
#include "hypack/tiling.hpp"
#include "hypack/transport.hpp"

using namespace hypack;

static void BM_KleinDistance(benchmark::State& state) {
    const KleinPoint p = polar_point(2.0, 0.3), q = polar_point(3.0, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(klein_distance(p, q));
}
BENCHMARK(BM_KleinDistance);

static void BM_ApplyCover(benchmark::State& state) {
    const BranchedCover cov = build_cover(3, static_cast<int>(state.range(0)));
    Rng rng(2);
    for (auto _ : state) {
        const KleinPoint p = polar_point(3.0 * rng.uniform(), 6.283 * rng.uniform());
        benchmark::DoNotOptimize(apply_cover(cov, p));
    }
}
BENCHMARK(BM_ApplyCover)->Arg(7)->Arg(20);

static void BM_OrbitQuery(benchmark::State& state) {
    const PeriodicPacking p = build_tight_packing(static_cast<int>(state.range(0)));
    const OrbitLocator loc(p, p.radius);
    Rng rng(3);
    for (auto _ : state) {
        const KleinPoint q = polar_point(4.0 * rng.uniform(), 6.283 * rng.uniform());
        benchmark::DoNotOptimize(loc.points_near(q, p.radius));
    }
}
BENCHMARK(BM_OrbitQuery)->Arg(7)->Arg(10);

static void BM_TightDensity(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(periodic_density(build_tight_packing(static_cast<int>(state.range(0)))));
}
BENCHMARK(BM_TightDensity)->Arg(7)->Arg(1000);

static void BM_Approximate(benchmark::State& state) {
    const CylinderWeights w = weights_from_bernoulli(std::vector<double>{0.3, 0.7}, static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(approximate(w, mpq_class(1, 20)));
}
BENCHMARK(BM_Approximate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_AverageCoverage(benchmark::State& state) {
    const PeriodicPacking p = build_tight_packing(7);
    const PeriodicFamily fam(p, p.radius);
    const FreeGroupEmbedding emb = default_free_group();
    for (auto _ : state)
        benchmark::DoNotOptimize(average_functional(origin_coverage, fam, emb, {1000, 4, 0.0, {}}));
}
BENCHMARK(BM_AverageCoverage)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
