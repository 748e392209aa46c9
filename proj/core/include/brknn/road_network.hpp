#pragma once

#include "brknn/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace brknn {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

constexpr EdgeId kInvalidEdge = 0xffffffffu;

/// Undirected edge stored in canonical orientation (u < v); weight > 0.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    double weight = 0.0;
};

struct AdjacencyEntry {
    VertexId to = 0;
    double weight = 0.0;
    EdgeId edge = kInvalidEdge;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t line_number);
    std::size_t line = 0;
};

/// How raw coordinates are rescaled so Euclidean distances and edge weights
/// share units. The affine fit solves for a single factor s minimizing
/// sum (w(e) - s * ED_raw(e))^2, then shrinks s so that after scaling no edge
/// is shorter than its Euclidean span (the lower-bound premise the quick
/// verification relies on).
struct CoordScaling {
    enum class Mode { kAffineFit, kConstant };
    Mode mode = Mode::kAffineFit;
    double factor = 1.0; // used by kConstant

    static CoordScaling affine_fit() { return {Mode::kAffineFit, 1.0}; }
    static CoordScaling constant(double f) { return {Mode::kConstant, f}; }
};

struct MetricViolation {
    VertexId u = 0;
    VertexId v = 0;
    double weight = 0.0;
    double euclid = 0.0;
};

struct MetricReport {
    static constexpr std::size_t kMaxSamples = 16;

    std::size_t edges_checked = 0;
    std::size_t violation_count = 0;
    double tolerance = 0.0;
    double worst_excess = 0.0; // max over edges of ED - w, violations only
    std::vector<MetricViolation> samples;

    bool ok() const { return violation_count == 0; }
};

/// Immutable undirected road graph with planar vertex coordinates.
class RoadNetwork {
public:
    RoadNetwork() = default;

    /// Builds a network from coordinates and an edge list. Edges are
    /// canonicalized to u < v; duplicates (either orientation) collapse to the
    /// minimum weight. Throws std::invalid_argument on self-loops,
    /// non-positive weights, or out-of-range endpoints. The metric flag is
    /// initialized with the default tolerance.
    static RoadNetwork from_parts(std::vector<Point2D> coords, const std::vector<Edge>& edges);

    std::size_t vertex_count() const { return coords_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    Point2D position(VertexId v) const { return coords_.at(v); }
    const std::vector<Point2D>& positions() const { return coords_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// All incident edges of v, one entry per neighbor.
    std::span<const AdjacencyEntry> neighbors(VertexId v) const;

    /// Order-insensitive edge lookup; nullptr when absent.
    const Edge* find_edge(VertexId a, VertexId b) const;
    EdgeId edge_id(VertexId a, VertexId b) const; // kInvalidEdge when absent

    bool metric_ok() const { return metric_ok_; }
    double coordinate_scale() const { return scale_; }
    double max_edge_weight() const { return max_weight_; }

private:
    std::vector<Point2D> coords_;
    std::vector<Edge> edges_;
    std::vector<AdjacencyEntry> adjacency_;       // CSR payload
    std::vector<std::uint32_t> adjacency_offsets_; // size vertex_count()+1
    std::unordered_map<std::uint64_t, EdgeId> edge_lookup_;
    bool metric_ok_ = false;
    double scale_ = 1.0;
    double max_weight_ = 0.0;

    void build_adjacency();

    friend MetricReport validate_metric(RoadNetwork& net, double tolerance);
    friend RoadNetwork load_dimacs(std::istream& gr, std::istream& co, const CoordScaling& scaling);
    friend RoadNetwork load_snapshot(std::istream& in);
};

/// Parses DIMACS shortest-path files: a distance graph (.gr, lines `c`,
/// `p sp n m`, `a u v w`) and a coordinate file (.co, lines `c`,
/// `p aux sp co n`, `v id x y`). File vertex ids are 1-based; the returned
/// network uses dense 0-based ids. Reverse/duplicate arcs collapse into one
/// undirected edge keeping the minimum weight. Coordinates are rescaled per
/// `scaling`, and the metric flag is set by a full validation pass.
RoadNetwork load_dimacs(std::istream& gr, std::istream& co,
                        const CoordScaling& scaling = CoordScaling::affine_fit());
RoadNetwork load_dimacs_files(const std::string& gr_path, const std::string& co_path,
                              const CoordScaling& scaling = CoordScaling::affine_fit());

/// Absolute slack absorbing floating-point rounding: 1e-6 * max edge weight.
double default_metric_tolerance(const RoadNetwork& net);

/// Checks w(e) >= ED(P(u), P(v)) - tolerance for every edge, records up to
/// MetricReport::kMaxSamples offenders, and updates the network's metric flag.
MetricReport validate_metric(RoadNetwork& net, double tolerance);
MetricReport validate_metric(RoadNetwork& net);

/// Versioned little-endian binary snapshot for fast reload.
void save_snapshot(const RoadNetwork& net, std::ostream& out);
RoadNetwork load_snapshot(std::istream& in);
void save_snapshot_file(const RoadNetwork& net, const std::string& path);
RoadNetwork load_snapshot_file(const std::string& path);

} // namespace brknn
