#include "brknn/oracle.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace brknn::oracle {

namespace {

// Plain textbook Dijkstra seeded at both endpoints of the object's edge.
std::vector<double> object_distances(const RoadNetwork& net, const MovingObject& m) {
    const Edge* e = net.find_edge(m.u, m.v);
    if (e == nullptr) {
        throw std::invalid_argument("object references a non-existent edge");
    }
    if (m.offset < 0.0 || m.offset > e->weight) {
        throw std::invalid_argument("object offset outside [0, edge weight]");
    }
    std::vector<double> dist(net.vertex_count(), kInfiniteDistance);
    using Entry = std::pair<double, VertexId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[e->u] = m.offset;
    heap.emplace(m.offset, e->u);
    dist[e->v] = e->weight - m.offset;
    heap.emplace(dist[e->v], e->v);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) {
            continue;
        }
        for (const AdjacencyEntry& ae : net.neighbors(u)) {
            const double nd = d + ae.weight;
            if (nd < dist[ae.to]) {
                dist[ae.to] = nd;
                heap.emplace(nd, ae.to);
            }
        }
    }
    return dist;
}

} // namespace

std::map<VertexId, std::vector<ObjectId>> rknn_oracle(const RoadNetwork& net,
                                                      const QuerySpec& spec,
                                                      std::span<const MovingObject> objects) {
    if (spec.k < 1) {
        throw std::invalid_argument("k must be at least 1");
    }
    std::unordered_set<VertexId> facility_set(spec.facilities.begin(), spec.facilities.end());
    std::map<VertexId, std::vector<ObjectId>> out;
    for (VertexId q : spec.query_facilities) {
        if (q >= net.vertex_count() || facility_set.count(q) == 0) {
            throw std::invalid_argument("query facility is not in the facility set");
        }
        out[q]; // every queried facility appears, possibly with an empty set
    }

    const auto k = static_cast<std::size_t>(spec.k);
    for (const MovingObject& m : objects) {
        const std::vector<double> dist = object_distances(net, m);
        std::vector<std::pair<double, VertexId>> reachable;
        reachable.reserve(spec.facilities.size());
        for (VertexId f : spec.facilities) {
            if (dist[f] != kInfiniteDistance) {
                reachable.emplace_back(dist[f], f);
            }
        }
        std::sort(reachable.begin(), reachable.end());
        const std::size_t take = std::min(k, reachable.size());
        for (std::size_t i = 0; i < take; ++i) {
            const auto it = out.find(reachable[i].second);
            if (it != out.end()) {
                it->second.push_back(m.id);
            }
        }
    }
    for (auto& [q, ids] : out) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    return out;
}

} // namespace brknn::oracle
