#include "brknn/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>
#include <thread>
#include <unordered_set>

namespace brknn {

namespace {

using HeapEntry = std::pair<double, VertexId>; // (distance, vertex), min first
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

// Tentative-distance array reusable across searches without refilling;
// entries are valid only when their stamp matches the current epoch.
struct DijkstraScratch {
    std::vector<double> dist;
    std::vector<std::uint32_t> stamp;
    std::uint32_t epoch = 0;

    void begin(std::size_t n) {
        if (dist.size() < n) {
            dist.resize(n, 0.0);
            stamp.resize(n, 0);
        }
        if (++epoch == 0) {
            std::fill(stamp.begin(), stamp.end(), 0u);
            epoch = 1;
        }
    }

    bool has(VertexId v) const { return stamp[v] == epoch; }
    double get(VertexId v) const { return stamp[v] == epoch ? dist[v] : kInfiniteDistance; }

    bool improve(VertexId v, double d) {
        if (stamp[v] != epoch || d < dist[v]) {
            stamp[v] = epoch;
            dist[v] = d;
            return true;
        }
        return false;
    }
};

} // namespace

Point2D object_position(const RoadNetwork& net, const MovingObject& m) {
    const Edge* e = net.find_edge(m.u, m.v);
    if (e == nullptr) {
        throw std::invalid_argument("object references a non-existent edge");
    }
    const double t = m.offset / e->weight;
    const Point2D a = net.position(e->u);
    const Point2D b = net.position(e->v);
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

double object_facility_distance(const RoadNetwork& net, const MovingObject& m,
                                const std::function<double(VertexId)>& dist_to_target) {
    const Edge* e = net.find_edge(m.u, m.v);
    if (e == nullptr) {
        throw std::invalid_argument("object references a non-existent edge");
    }
    if (m.offset < 0.0 || m.offset > e->weight) {
        throw std::invalid_argument("object offset outside [0, edge weight]");
    }
    const double via_u = m.offset + dist_to_target(e->u);
    const double via_v = (e->weight - m.offset) + dist_to_target(e->v);
    return std::min(via_u, via_v);
}

// ---------------------------------------------------------------------------

struct BatchEngine::EdgeObjects {
    // CSR: indices into the batch's object span, grouped by edge id.
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> object_index;

    std::span<const std::uint32_t> on_edge(EdgeId e) const {
        return {object_index.data() + offsets[e], object_index.data() + offsets[e + 1]};
    }
};

struct BatchEngine::Worker {
    SsspCache cache;
    BatchCounters counters;
    DijkstraScratch expansion;
    DijkstraScratch probe;
    std::vector<std::uint32_t> object_stamp;
    std::uint32_t object_epoch = 0;
    DistanceMap uncached; // result slot when the cache is disabled
    std::ostream* trace = nullptr;

    void begin_query(std::size_t object_count) {
        if (object_stamp.size() < object_count) {
            object_stamp.resize(object_count, 0);
        }
        if (++object_epoch == 0) {
            std::fill(object_stamp.begin(), object_stamp.end(), 0u);
            object_epoch = 1;
        }
    }

    bool object_processed(std::uint32_t index) const {
        return object_stamp[index] == object_epoch;
    }
    void mark_object(std::uint32_t index) { object_stamp[index] = object_epoch; }
};

BatchEngine::BatchEngine(const RoadNetwork& net, QuerySpec spec, EngineConfig config)
    : net_(net), spec_(std::move(spec)), config_(config), worker_(std::make_unique<Worker>()) {
    validate_spec();
    facility_mask_.assign(net_.vertex_count(), 0);
    std::vector<FacilityEntry> entries;
    entries.reserve(spec_.facilities.size());
    for (VertexId f : spec_.facilities) {
        facility_mask_[f] = 1;
        entries.push_back({f, net_.position(f)});
    }
    index_ = FacilityIndex::build(entries, config_.rtree_max_entries);
    worker_->trace = config_.trace;
}

BatchEngine::~BatchEngine() = default;

void BatchEngine::validate_spec() const {
    if (spec_.k < 1) {
        throw std::invalid_argument("k must be at least 1");
    }
    VertexId prev = 0;
    bool first = true;
    for (VertexId f : spec_.facilities) {
        if (f >= net_.vertex_count()) {
            throw std::invalid_argument("facility id out of range");
        }
        if (!first && f <= prev) {
            throw std::invalid_argument("facilities must be sorted and duplicate-free");
        }
        prev = f;
        first = false;
    }
}

void BatchEngine::reset() {
    worker_->cache.clear();
    worker_->counters = {};
}

const BatchCounters& BatchEngine::counters() const { return worker_->counters; }
const SsspCache& BatchEngine::cache() const { return worker_->cache; }

BatchEngine::EdgeObjects BatchEngine::build_edge_objects(
    std::span<const MovingObject> objects) const {
    EdgeObjects eo;
    eo.offsets.assign(net_.edge_count() + 1, 0);
    std::vector<EdgeId> edge_of(objects.size());
    std::unordered_set<ObjectId> ids;
    ids.reserve(objects.size());
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const MovingObject& m = objects[i];
        if (m.u >= m.v) {
            throw std::invalid_argument("object edge must be canonical (u < v)");
        }
        const EdgeId e = net_.edge_id(m.u, m.v);
        if (e == kInvalidEdge) {
            throw std::invalid_argument("object references a non-existent edge");
        }
        if (m.offset < 0.0 || m.offset > net_.edges()[e].weight) {
            throw std::invalid_argument("object offset outside [0, edge weight]");
        }
        if (!ids.insert(m.id).second) {
            throw std::invalid_argument("duplicate object id");
        }
        edge_of[i] = e;
        ++eo.offsets[e + 1];
    }
    for (std::size_t i = 1; i < eo.offsets.size(); ++i) {
        eo.offsets[i] += eo.offsets[i - 1];
    }
    eo.object_index.resize(objects.size());
    std::vector<std::uint32_t> cursor(eo.offsets.begin(), eo.offsets.end() - 1);
    for (std::size_t i = 0; i < objects.size(); ++i) {
        eo.object_index[cursor[edge_of[i]]++] = static_cast<std::uint32_t>(i);
    }
    return eo;
}

DistanceMap BatchEngine::run_object_sssp(Worker& w, const MovingObject& m) const {
    const Edge* e = net_.find_edge(m.u, m.v);
    // Object validity was checked when the batch was set up; fine-grained
    // callers go through the same checks here.
    if (e == nullptr) {
        throw std::invalid_argument("object references a non-existent edge");
    }
    if (m.offset < 0.0 || m.offset > e->weight) {
        throw std::invalid_argument("object offset outside [0, edge weight]");
    }
    ++w.counters.sssp_runs;
    DistanceMap map;
    map.source_object = m.id;
    map.dist.assign(net_.vertex_count(), kInfiniteDistance);
    MinHeap heap;
    const auto seed = [&](VertexId v, double d) {
        if (d < map.dist[v]) {
            map.dist[v] = d;
            heap.emplace(d, v);
        }
    };
    seed(e->u, m.offset);
    seed(e->v, e->weight - m.offset);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > map.dist[u]) {
            continue; // stale entry
        }
        for (const AdjacencyEntry& ae : net_.neighbors(u)) {
            const double nd = d + ae.weight;
            if (nd < map.dist[ae.to]) {
                map.dist[ae.to] = nd;
                heap.emplace(nd, ae.to);
            }
        }
    }
    return map;
}

const DistanceMap& BatchEngine::object_map(Worker& w, const MovingObject& m) const {
    if (config_.cache_enabled) {
        if (const DistanceMap* hit = w.cache.lookup(m.id)) {
            ++w.counters.cache_hits;
            return *hit;
        }
        ++w.counters.cache_misses;
        return w.cache.store(run_object_sssp(w, m));
    }
    w.uncached = run_object_sssp(w, m);
    return w.uncached;
}

const DistanceMap& BatchEngine::sssp_from_object(const MovingObject& m) {
    return object_map(*worker_, m);
}

std::vector<std::pair<VertexId, double>> BatchEngine::knn_of_object(const MovingObject& m) {
    const DistanceMap& map = object_map(*worker_, m);
    const auto k = static_cast<std::size_t>(spec_.k);
    // Bounded max-heap of the k best (distance, id) pairs seen so far.
    using Cand = std::pair<double, VertexId>;
    std::priority_queue<Cand> best;
    for (VertexId f : spec_.facilities) {
        const double d = map.dist[f];
        if (d == kInfiniteDistance) {
            continue;
        }
        if (best.size() < k) {
            best.emplace(d, f);
        } else if (Cand{d, f} < best.top()) {
            best.pop();
            best.emplace(d, f);
        }
    }
    std::vector<std::pair<VertexId, double>> out(best.size());
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
        *it = {best.top().second, best.top().first};
        best.pop();
    }
    return out;
}

bool BatchEngine::verify(Worker& w, const MovingObject& m, VertexId query_facility,
                         double radius_estimate) const {
    if (!std::isfinite(radius_estimate)) {
        return false; // query facility unreachable from the object
    }
    if (config_.quick_verify_enabled && net_.metric_ok()) {
        const RangeCountResult rc =
            index_.range_count_stats(object_position(net_, m), radius_estimate,
                                     config_.rtree_mode);
        w.counters.rtree_nodes_visited += rc.nodes_visited;
        if (rc.count <= static_cast<std::size_t>(spec_.k)) {
            ++w.counters.quick_verify_hits;
            if (w.trace) {
                *w.trace << "verify " << m.id << " quick-accept\n";
            }
            return true;
        }
    }
    ++w.counters.full_verifications;
    const DistanceMap& map = object_map(w, m);
    const double d_query = map.dist[query_facility];
    bool member = false;
    if (d_query != kInfiniteDistance) {
        // Membership in the k nearest under the (distance, id) order is
        // equivalent to fewer than k facilities ranking strictly ahead.
        std::size_t ahead = 0;
        member = true;
        for (VertexId f : spec_.facilities) {
            const double d = map.dist[f];
            if (d < d_query || (d == d_query && f < query_facility)) {
                if (++ahead >= static_cast<std::size_t>(spec_.k)) {
                    member = false;
                    break;
                }
            }
        }
    }
    if (w.trace) {
        *w.trace << "verify " << m.id << " fallback " << (member ? "accept" : "reject") << "\n";
    }
    return member;
}

bool BatchEngine::verify_rknn(const MovingObject& m, VertexId query_facility,
                              double radius_estimate) {
    if (query_facility >= net_.vertex_count() || !facility_mask_[query_facility]) {
        throw std::invalid_argument("query facility is not a facility vertex");
    }
    return verify(*worker_, m, query_facility, radius_estimate);
}

bool BatchEngine::can_prune(Worker& w, VertexId u, double dist_from_query,
                            VertexId query_facility) const {
    // Cheap necessary condition: at most k facilities inside the Euclidean
    // circle of the settled distance means fewer than k can be strictly
    // closer in the network (the circle also holds the query facility).
    if (config_.quick_verify_enabled && net_.metric_ok()) {
        const RangeCountResult rc =
            index_.range_count_stats(net_.position(u), dist_from_query, config_.rtree_mode);
        w.counters.rtree_nodes_visited += rc.nodes_visited;
        if (rc.count <= static_cast<std::size_t>(spec_.k)) {
            return false;
        }
    }
    // Confirm with a bounded search from u: prune only when at least k
    // facilities other than the query sit strictly inside dist_from_query.
    ++w.counters.prune_probes;
    const double bound = dist_from_query - config_.tie_epsilon;
    DijkstraScratch& dj = w.probe;
    dj.begin(net_.vertex_count());
    MinHeap heap;
    dj.improve(u, 0.0);
    heap.emplace(0.0, u);
    int found = 0;
    while (!heap.empty()) {
        const auto [d, x] = heap.top();
        heap.pop();
        if (d > dj.get(x)) {
            continue;
        }
        if (!(d < bound)) {
            break; // everything left is at least the bound away
        }
        if (facility_mask_[x] && x != query_facility) {
            if (++found >= spec_.k) {
                return true;
            }
        }
        for (const AdjacencyEntry& ae : net_.neighbors(x)) {
            const double nd = d + ae.weight;
            if (nd < bound && dj.improve(ae.to, nd)) {
                heap.emplace(nd, ae.to);
            }
        }
    }
    return false;
}

std::vector<ObjectId> BatchEngine::expand(Worker& w, VertexId query_facility,
                                          std::span<const MovingObject> objects,
                                          const EdgeObjects& edge_objects) const {
    if (query_facility >= net_.vertex_count()) {
        throw std::invalid_argument("query facility is not a vertex");
    }
    if (!facility_mask_[query_facility]) {
        throw std::invalid_argument("query facility is not a facility vertex");
    }
    if (w.trace) {
        *w.trace << "query " << query_facility << "\n";
    }
    std::vector<ObjectId> result;
    w.begin_query(objects.size());
    DijkstraScratch& dj = w.expansion;
    dj.begin(net_.vertex_count());
    MinHeap heap;
    dj.improve(query_facility, 0.0);
    heap.emplace(0.0, query_facility);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dj.get(u)) {
            continue; // stale entry
        }
        ++w.counters.vertices_settled;
        if (w.trace) {
            *w.trace << "settle " << u << " " << d << "\n";
        }
        // Verify every unprocessed object on an edge incident to u. The
        // radius estimate through either endpoint is always an upper bound of
        // the object's true distance to the query facility, which is all the
        // quick verification needs.
        for (const AdjacencyEntry& ae : net_.neighbors(u)) {
            for (std::uint32_t oi : edge_objects.on_edge(ae.edge)) {
                if (w.object_processed(oi)) {
                    continue;
                }
                w.mark_object(oi);
                const MovingObject& m = objects[oi];
                const double offset_from_u = (m.u == u) ? m.offset : ae.weight - m.offset;
                const VertexId other = (m.u == u) ? m.v : m.u;
                double radius = d + offset_from_u;
                if (dj.has(other)) {
                    radius = std::min(radius, dj.get(other) + (ae.weight - offset_from_u));
                }
                if (verify(w, m, query_facility, radius)) {
                    result.push_back(m.id);
                }
            }
        }
        if (config_.pruning_enabled && u != query_facility &&
            can_prune(w, u, d, query_facility)) {
            if (w.trace) {
                *w.trace << "prune " << u << "\n";
            }
            continue;
        }
        for (const AdjacencyEntry& ae : net_.neighbors(u)) {
            const double nd = d + ae.weight;
            if (config_.max_search_radius && nd > *config_.max_search_radius) {
                continue;
            }
            if (dj.improve(ae.to, nd)) {
                heap.emplace(nd, ae.to);
            }
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<ObjectId> BatchEngine::expand_query(VertexId query_facility,
                                                std::span<const MovingObject> objects) {
    const EdgeObjects eo = build_edge_objects(objects);
    return expand(*worker_, query_facility, objects, eo);
}

BatchResult BatchEngine::batch_rknn(std::span<const MovingObject> objects, unsigned threads) {
    for (VertexId q : spec_.query_facilities) {
        if (q >= net_.vertex_count() || !facility_mask_[q]) {
            throw std::invalid_argument("query facility is not in the facility set");
        }
    }
    const EdgeObjects edge_objects = build_edge_objects(objects);
    reset();

    BatchResult out;
    const auto t0 = std::chrono::steady_clock::now();
    if (threads <= 1) {
        for (VertexId q : spec_.query_facilities) {
            out.results[q] = expand(*worker_, q, objects, edge_objects);
        }
        out.counters = worker_->counters;
    } else {
        const auto& queries = spec_.query_facilities;
        std::vector<std::unique_ptr<Worker>> workers;
        std::vector<std::vector<std::pair<VertexId, std::vector<ObjectId>>>> partials(threads);
        workers.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            workers.push_back(std::make_unique<Worker>());
        }
        {
            std::vector<std::jthread> pool;
            pool.reserve(threads);
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back([&, t] {
                    for (std::size_t i = t; i < queries.size(); i += threads) {
                        partials[t].emplace_back(
                            queries[i], expand(*workers[t], queries[i], objects, edge_objects));
                    }
                });
            }
        }
        for (unsigned t = 0; t < threads; ++t) {
            out.counters += workers[t]->counters;
            for (auto& [q, ids] : partials[t]) {
                out.results[q] = std::move(ids);
            }
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    out.counters.wall_time_seconds = std::chrono::duration<double>(t1 - t0).count();
    const std::uint64_t lookups = out.counters.cache_hits + out.counters.cache_misses;
    out.counters.cache_hit_rate =
        lookups == 0 ? 0.0 : static_cast<double>(out.counters.cache_hits) / lookups;
    if (threads <= 1) {
        worker_->counters = out.counters;
    }
    return out;
}

BatchResult batch_rknn(const RoadNetwork& net, const QuerySpec& spec,
                       std::span<const MovingObject> objects, const EngineConfig& config) {
    BatchEngine engine(net, spec, config);
    return engine.batch_rknn(objects);
}

} // namespace brknn
