#include <benchmark/benchmark.h>

#include "brknn/rtree.hpp"

#include <random>
#include <vector>

using namespace brknn;

namespace {

std::vector<FacilityEntry> make_points(std::size_t n) {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    std::vector<FacilityEntry> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({static_cast<VertexId>(i), {u(rng), u(rng)}});
    }
    return pts;
}

std::vector<std::pair<Point2D, double>> make_probes(std::size_t n) {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> c(0.0, 1000.0);
    std::uniform_real_distribution<double> r(1.0, 120.0);
    std::vector<std::pair<Point2D, double>> probes;
    probes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        probes.push_back({{c(rng), c(rng)}, r(rng)});
    }
    return probes;
}

} // namespace

static void BM_RangeCountMbc(benchmark::State& state) {
    const auto pts = make_points(static_cast<std::size_t>(state.range(0)));
    const FacilityIndex index = FacilityIndex::build(pts, 16);
    const auto probes = make_probes(256);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [center, radius] = probes[i++ % probes.size()];
        benchmark::DoNotOptimize(index.range_count_mbc(center, radius).count);
    }
}
BENCHMARK(BM_RangeCountMbc)->Range(1 << 10, 1 << 17);

static void BM_RangeCountMbrOnly(benchmark::State& state) {
    const auto pts = make_points(static_cast<std::size_t>(state.range(0)));
    const FacilityIndex index = FacilityIndex::build(pts, 16);
    const auto probes = make_probes(256);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [center, radius] = probes[i++ % probes.size()];
        benchmark::DoNotOptimize(index.range_count_mbr_only(center, radius).count);
    }
}
BENCHMARK(BM_RangeCountMbrOnly)->Range(1 << 10, 1 << 17);

static void BM_LinearScanCount(benchmark::State& state) {
    const auto pts = make_points(static_cast<std::size_t>(state.range(0)));
    const auto probes = make_probes(256);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [center, radius] = probes[i++ % probes.size()];
        std::size_t n = 0;
        for (const auto& p : pts) {
            if (euclidean(center, p.position) <= radius) {
                ++n;
            }
        }
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_LinearScanCount)->Range(1 << 10, 1 << 17);

static void BM_BulkLoad(benchmark::State& state) {
    const auto pts = make_points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(FacilityIndex::build(pts, 16).size());
    }
}
BENCHMARK(BM_BulkLoad)->Range(1 << 10, 1 << 17);

BENCHMARK_MAIN();
