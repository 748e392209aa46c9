#pragma once

#include "brknn/road_network.hpp"
#include "brknn/rtree.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace brknn {

constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

using ObjectId = std::uint32_t;

/// An object pinned to an edge. The edge is canonical (u < v) and the offset
/// is measured along the edge from endpoint u, 0 <= offset <= w(edge).
struct MovingObject {
    ObjectId id = 0;
    VertexId u = 0;
    VertexId v = 0;
    double offset = 0.0;
};

/// A batch query: the facilities being asked about (query_facilities, order
/// preserved, duplicates allowed), the neighborhood size k, and the full
/// facility set the k-nearest-neighbor sets are drawn from. `facilities` is
/// sorted ascending and duplicate-free; query facilities must be members.
struct QuerySpec {
    std::vector<VertexId> query_facilities;
    int k = 1;
    std::vector<VertexId> facilities;

    static QuerySpec all_vertices(const RoadNetwork& net, int k,
                                  std::vector<VertexId> queries);
};

/// Finalized shortest-path distances from one object to every vertex;
/// infinity marks unreachable vertices.
struct DistanceMap {
    ObjectId source_object = 0;
    std::vector<double> dist;

    bool reached(VertexId v) const { return dist[v] != kInfiniteDistance; }
    double at(VertexId v) const { return dist[v]; }
};

/// Per-batch store of object-sourced distance maps. Entries are only ever
/// added within a batch; the store is cleared when a new batch starts.
class SsspCache {
public:
    const DistanceMap* lookup(ObjectId id);
    const DistanceMap& store(DistanceMap map);
    void clear();

    std::size_t size() const { return entries_.size(); }
    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

private:
    std::unordered_map<ObjectId, DistanceMap> entries_;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
};

struct EngineConfig {
    bool quick_verify_enabled = true;
    bool cache_enabled = true;
    bool pruning_enabled = true;
    RtreeMode rtree_mode = RtreeMode::kMbc;
    std::optional<double> max_search_radius; // expansion stops past this distance
    double tie_epsilon = 0.0;                 // slack subtracted from strict pruning thresholds
    std::uint32_t rtree_max_entries = 16;
    std::ostream* trace = nullptr;            // per-query event log (sequential runs only)
};

struct BatchCounters {
    std::uint64_t sssp_runs = 0;          // full object-sourced Dijkstra executions
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    std::uint64_t rtree_nodes_visited = 0;
    std::uint64_t quick_verify_hits = 0;
    std::uint64_t full_verifications = 0;
    std::uint64_t vertices_settled = 0;   // expansion searches only
    std::uint64_t prune_probes = 0;       // bounded confirmation searches
    double cache_hit_rate = 0.0;          // hits / (hits + misses), 0 when unused
    double wall_time_seconds = 0.0;       // query phase only

    BatchCounters& operator+=(const BatchCounters& other);
};

/// Output of a batch run: for every query facility the set of objects that
/// count it among their k nearest facilities, plus instrumentation.
struct BatchResult {
    std::map<VertexId, std::vector<ObjectId>> results; // values sorted ascending
    BatchCounters counters;
};

} // namespace brknn
