#pragma once

#include "brknn/types.hpp"

#include <functional>
#include <memory>
#include <span>
#include <utility>

namespace brknn {

/// Planar position of an on-edge object: linear interpolation between the
/// edge endpoints by offset / weight.
Point2D object_position(const RoadNetwork& net, const MovingObject& m);

/// Network distance from an on-edge object to a target, given shortest-path
/// distances from the target to the object's edge endpoints:
/// min(offset + d(u), w - offset + d(v)). Infinity when both endpoints are
/// unreachable. Throws std::invalid_argument when the offset leaves [0, w] or
/// the edge is missing.
double object_facility_distance(const RoadNetwork& net, const MovingObject& m,
                                const std::function<double(VertexId)>& dist_to_target);

/// Batch reverse-k-nearest-neighbor engine.
///
/// Construction builds the count-augmented facility R-tree. A batch run
/// expands a shortest-path search from each query facility, verifying the
/// objects met along the way: a candidate is accepted immediately when the
/// Euclidean circle around it with its (over-estimated) network distance to
/// the query holds at most k facilities, and otherwise falls back to an exact
/// membership test backed by an object-sourced shortest-path map that is
/// cached across the whole batch.
class BatchEngine {
public:
    BatchEngine(const RoadNetwork& net, QuerySpec spec, EngineConfig config = {});
    ~BatchEngine();

    BatchEngine(const BatchEngine&) = delete;
    BatchEngine& operator=(const BatchEngine&) = delete;

    /// Runs the whole batch with a fresh cache. With threads > 1 queries are
    /// distributed over workers with private caches; result sets are
    /// identical to a sequential run, counters may differ.
    BatchResult batch_rknn(std::span<const MovingObject> objects, unsigned threads = 1);

    // Fine-grained operations sharing the engine's current cache and counters.

    /// Cached full shortest-path map sourced at the object.
    const DistanceMap& sssp_from_object(const MovingObject& m);

    /// The k reachable facilities nearest to m, ascending by (distance, id).
    std::vector<std::pair<VertexId, double>> knn_of_object(const MovingObject& m);

    /// Whether the query facility is one of m's k nearest facilities.
    /// radius_estimate must be >= the true network distance from m to the
    /// query facility; infinity means unreachable and yields false.
    bool verify_rknn(const MovingObject& m, VertexId query_facility, double radius_estimate);

    /// Single-query expansion over the given objects; returns the sorted ids
    /// of the objects that have the query facility among their k nearest.
    std::vector<ObjectId> expand_query(VertexId query_facility,
                                       std::span<const MovingObject> objects);

    /// Clears cache and counters, starting a fresh batch context.
    void reset();

    const BatchCounters& counters() const;
    const SsspCache& cache() const;
    const FacilityIndex& facility_index() const { return index_; }
    const QuerySpec& spec() const { return spec_; }
    const EngineConfig& config() const { return config_; }
    const RoadNetwork& network() const { return net_; }

private:
    struct Worker;
    struct EdgeObjects;

    const RoadNetwork& net_;
    QuerySpec spec_;
    EngineConfig config_;
    FacilityIndex index_;
    std::vector<char> facility_mask_;
    std::unique_ptr<Worker> worker_; // sequential state

    void validate_spec() const;
    EdgeObjects build_edge_objects(std::span<const MovingObject> objects) const;
    std::vector<ObjectId> expand(Worker& w, VertexId query_facility,
                                 std::span<const MovingObject> objects,
                                 const EdgeObjects& edge_objects) const;
    bool verify(Worker& w, const MovingObject& m, VertexId query_facility,
                double radius_estimate) const;
    bool can_prune(Worker& w, VertexId u, double dist_from_query, VertexId query_facility) const;
    const DistanceMap& object_map(Worker& w, const MovingObject& m) const;
    DistanceMap run_object_sssp(Worker& w, const MovingObject& m) const;
};

/// Convenience wrapper: build an engine and run one batch.
BatchResult batch_rknn(const RoadNetwork& net, const QuerySpec& spec,
                       std::span<const MovingObject> objects,
                       const EngineConfig& config = {});

} // namespace brknn
