#include <benchmark/benchmark.h>

#include "brknn/engine.hpp"
#include "brknn/workload.hpp"

#include <random>

using namespace brknn;

namespace {

// Jittered grid with weights above the Euclidean span.
RoadNetwork make_grid(std::size_t side) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> stretch(1.0, 1.6);
    std::vector<Point2D> coords(side * side);
    std::vector<Edge> edges;
    const auto id = [side](std::size_t r, std::size_t c) {
        return static_cast<VertexId>(r * side + c);
    };
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            coords[id(r, c)] = {static_cast<double>(c), static_cast<double>(r)};
            if (c + 1 < side) {
                edges.push_back({id(r, c), id(r, c + 1), stretch(rng)});
            }
            if (r + 1 < side) {
                edges.push_back({id(r, c), id(r + 1, c), stretch(rng)});
            }
        }
    }
    return RoadNetwork::from_parts(std::move(coords), edges);
}

struct BenchWorld {
    RoadNetwork net;
    workload::Workload wl;

    BenchWorld(std::size_t side, std::size_t objects, std::size_t batch, int k)
        : net(make_grid(side)) {
        workload::WorkloadSpec ws;
        ws.seed = 7;
        ws.num_objects = objects;
        ws.batch_size = batch;
        ws.k = k;
        wl = workload::generate(net, ws);
    }
};

const BenchWorld& world() {
    static BenchWorld w(50, 2000, 50, 10);
    return w;
}

void run_batch(benchmark::State& state, EngineConfig config) {
    const BenchWorld& w = world();
    for (auto _ : state) {
        BatchEngine engine(w.net, w.wl.spec, config);
        benchmark::DoNotOptimize(engine.batch_rknn(w.wl.objects).results.size());
    }
}

} // namespace

static void BM_BatchFull(benchmark::State& state) { run_batch(state, EngineConfig{}); }
BENCHMARK(BM_BatchFull)->Unit(benchmark::kMillisecond);

static void BM_BatchNoCache(benchmark::State& state) {
    EngineConfig config;
    config.cache_enabled = false;
    run_batch(state, config);
}
BENCHMARK(BM_BatchNoCache)->Unit(benchmark::kMillisecond);

static void BM_BatchNoQuickVerify(benchmark::State& state) {
    EngineConfig config;
    config.quick_verify_enabled = false;
    run_batch(state, config);
}
BENCHMARK(BM_BatchNoQuickVerify)->Unit(benchmark::kMillisecond);

static void BM_BatchNoPruning(benchmark::State& state) {
    EngineConfig config;
    config.pruning_enabled = false;
    run_batch(state, config);
}
BENCHMARK(BM_BatchNoPruning)->Unit(benchmark::kMillisecond);

static void BM_ObjectSssp(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    const RoadNetwork net = make_grid(side);
    QuerySpec spec = QuerySpec::all_vertices(net, 10, {0});
    const Edge& e = net.edges()[net.edge_count() / 2];
    const MovingObject m{0, e.u, e.v, e.weight / 2.0};
    EngineConfig config;
    config.cache_enabled = false; // fresh run every iteration
    BatchEngine engine(net, spec, config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.sssp_from_object(m).dist.size());
    }
}
BENCHMARK(BM_ObjectSssp)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
