#pragma once

#include "brknn/geometry.hpp"
#include "brknn/road_network.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace brknn {

/// Pruning discipline used while counting facilities inside a circle.
/// kMbc tests the circle against child rectangles with minDist/maxDist and
/// adds pre-stored counts for fully covered subtrees; kMbr descends on plain
/// rectangle overlap with the circle's bounding square. Both are exact: leaf
/// entries are always tested point-by-point.
enum class RtreeMode { kMbc, kMbr };

struct FacilityEntry {
    VertexId id = 0;
    Point2D position;
};

struct RtreeNode {
    Mbr mbr;
    std::uint32_t count = 0; // facilities in this subtree
    std::vector<RtreeNode> children;
    std::vector<FacilityEntry> entries;

    bool is_leaf() const { return children.empty(); }
};

struct RangeCountResult {
    std::size_t count = 0;
    std::size_t nodes_visited = 0;
};

/// Static count-augmented R-tree over facility coordinates, bulk-loaded with
/// Sort-Tile-Recursive packing. Immutable after build; queries are safe to
/// run concurrently.
class FacilityIndex {
public:
    FacilityIndex() = default; // empty sentinel: size 0, all counts 0

    /// Deterministic for a fixed input sequence. Throws std::invalid_argument
    /// on max_entries < 2 or non-finite coordinates. An empty input yields the
    /// empty sentinel.
    static FacilityIndex build(std::span<const FacilityEntry> facilities,
                               std::uint32_t max_entries = 16);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    std::uint32_t max_entries() const { return max_entries_; }
    const RtreeNode& root() const { return root_; }

    /// Exact number of facilities within Euclidean distance `radius` of
    /// `center` (boundary inclusive). Throws std::invalid_argument on a
    /// negative radius.
    std::size_t range_count(Point2D center, double radius) const;

    RangeCountResult range_count_mbc(Point2D center, double radius) const;
    RangeCountResult range_count_mbr_only(Point2D center, double radius) const;
    RangeCountResult range_count_stats(Point2D center, double radius, RtreeMode mode) const;

    /// Recomputes subtree cardinalities and bounding boxes, checking the
    /// stored counts, containment, and fanout bounds.
    bool audit() const;

    /// Indented structural dump for golden tests.
    void dump(std::ostream& out) const;

private:
    RtreeNode root_;
    std::size_t size_ = 0;
    std::uint32_t max_entries_ = 16;
};

} // namespace brknn
