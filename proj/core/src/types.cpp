#include "brknn/types.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace brknn {

QuerySpec QuerySpec::all_vertices(const RoadNetwork& net, int k, std::vector<VertexId> queries) {
    QuerySpec spec;
    spec.k = k;
    spec.query_facilities = std::move(queries);
    spec.facilities.resize(net.vertex_count());
    std::iota(spec.facilities.begin(), spec.facilities.end(), VertexId{0});
    return spec;
}

const DistanceMap* SsspCache::lookup(ObjectId id) {
    const auto it = entries_.find(id);
    if (it == entries_.end()) {
        ++misses_;
        return nullptr;
    }
    ++hits_;
    return &it->second;
}

const DistanceMap& SsspCache::store(DistanceMap map) {
    const ObjectId id = map.source_object;
    auto [it, inserted] = entries_.emplace(id, std::move(map));
    if (!inserted) {
        throw std::logic_error("distance map already cached for this object");
    }
    return it->second;
}

void SsspCache::clear() {
    entries_.clear();
    hits_ = 0;
    misses_ = 0;
}

BatchCounters& BatchCounters::operator+=(const BatchCounters& other) {
    sssp_runs += other.sssp_runs;
    cache_hits += other.cache_hits;
    cache_misses += other.cache_misses;
    rtree_nodes_visited += other.rtree_nodes_visited;
    quick_verify_hits += other.quick_verify_hits;
    full_verifications += other.full_verifications;
    vertices_settled += other.vertices_settled;
    prune_probes += other.prune_probes;
    return *this;
}

} // namespace brknn
