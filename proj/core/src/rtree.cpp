#include "brknn/rtree.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace brknn {

namespace {

Mbr mbr_of_entries(const std::vector<FacilityEntry>& entries) {
    Mbr box;
    for (const auto& e : entries) {
        box.expand(e.position);
    }
    return box;
}

Mbr mbr_of_children(const std::vector<RtreeNode>& children) {
    Mbr box;
    for (const auto& c : children) {
        box.expand(c.mbr);
    }
    return box;
}

// One Sort-Tile-Recursive packing pass: groups `level` nodes into parents of
// at most max_entries children, tiling by x then y on the child centers.
std::vector<RtreeNode> pack_level(std::vector<RtreeNode> level, std::uint32_t max_entries) {
    const std::size_t n = level.size();
    const std::size_t parent_count = (n + max_entries - 1) / max_entries;
    const auto slices = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(parent_count))));
    const std::size_t slice_size = slices * max_entries;

    std::stable_sort(level.begin(), level.end(), [](const RtreeNode& a, const RtreeNode& b) {
        return a.mbr.center().x < b.mbr.center().x;
    });
    std::vector<RtreeNode> parents;
    parents.reserve(parent_count);
    for (std::size_t begin = 0; begin < n; begin += slice_size) {
        const std::size_t end = std::min(begin + slice_size, n);
        std::stable_sort(level.begin() + begin, level.begin() + end,
                         [](const RtreeNode& a, const RtreeNode& b) {
                             return a.mbr.center().y < b.mbr.center().y;
                         });
        for (std::size_t i = begin; i < end; i += max_entries) {
            const std::size_t j = std::min(i + max_entries, end);
            RtreeNode parent;
            parent.children.assign(std::make_move_iterator(level.begin() + i),
                                   std::make_move_iterator(level.begin() + j));
            parent.mbr = mbr_of_children(parent.children);
            std::uint32_t count = 0;
            for (const auto& c : parent.children) {
                count += c.count;
            }
            parent.count = count;
            parents.push_back(std::move(parent));
        }
    }
    return parents;
}

bool audit_node(const RtreeNode& node, std::uint32_t max_entries, bool is_root) {
    if (node.is_leaf()) {
        if (node.count != node.entries.size()) {
            return false;
        }
        if (!is_root && (node.entries.empty() || node.entries.size() > max_entries)) {
            return false;
        }
        if (is_root && node.entries.size() > max_entries) {
            return false;
        }
        for (const auto& e : node.entries) {
            if (!node.mbr.contains(e.position)) {
                return false;
            }
        }
        return true;
    }
    if (!node.entries.empty()) {
        return false;
    }
    if (node.children.empty() || node.children.size() > max_entries) {
        return false;
    }
    std::uint32_t total = 0;
    for (const auto& c : node.children) {
        if (!node.mbr.contains(c.mbr)) {
            return false;
        }
        if (!audit_node(c, max_entries, false)) {
            return false;
        }
        total += c.count;
    }
    return total == node.count;
}

void dump_node(const RtreeNode& node, std::ostream& out, int depth) {
    for (int i = 0; i < depth; ++i) {
        out << "  ";
    }
    if (node.is_leaf()) {
        out << "leaf count=" << node.count;
        for (const auto& e : node.entries) {
            out << " (" << e.id << ":" << e.position.x << "," << e.position.y << ")";
        }
        out << "\n";
    } else {
        out << "node count=" << node.count << " children=" << node.children.size() << "\n";
        for (const auto& c : node.children) {
            dump_node(c, out, depth + 1);
        }
    }
}

} // namespace

FacilityIndex FacilityIndex::build(std::span<const FacilityEntry> facilities,
                                   std::uint32_t max_entries) {
    if (max_entries < 2) {
        throw std::invalid_argument("max_entries must be at least 2");
    }
    FacilityIndex index;
    index.max_entries_ = max_entries;
    index.size_ = facilities.size();
    if (facilities.empty()) {
        return index;
    }

    std::vector<FacilityEntry> sorted(facilities.begin(), facilities.end());
    for (const auto& f : sorted) {
        if (!std::isfinite(f.position.x) || !std::isfinite(f.position.y)) {
            throw std::invalid_argument("non-finite facility coordinate");
        }
    }
    std::sort(sorted.begin(), sorted.end(), [](const FacilityEntry& a, const FacilityEntry& b) {
        if (a.position.x != b.position.x) {
            return a.position.x < b.position.x;
        }
        if (a.position.y != b.position.y) {
            return a.position.y < b.position.y;
        }
        return a.id < b.id;
    });

    // Leaf tiling over the point set, then repeated packing passes upward.
    const std::size_t n = sorted.size();
    const std::size_t leaf_count = (n + max_entries - 1) / max_entries;
    const auto slices =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(leaf_count))));
    const std::size_t slice_size = slices * max_entries;

    std::vector<RtreeNode> level;
    level.reserve(leaf_count);
    for (std::size_t begin = 0; begin < n; begin += slice_size) {
        const std::size_t end = std::min(begin + slice_size, n);
        std::stable_sort(sorted.begin() + begin, sorted.begin() + end,
                         [](const FacilityEntry& a, const FacilityEntry& b) {
                             if (a.position.y != b.position.y) {
                                 return a.position.y < b.position.y;
                             }
                             return a.id < b.id;
                         });
        for (std::size_t i = begin; i < end; i += max_entries) {
            const std::size_t j = std::min(i + max_entries, end);
            RtreeNode leaf;
            leaf.entries.assign(sorted.begin() + i, sorted.begin() + j);
            leaf.mbr = mbr_of_entries(leaf.entries);
            leaf.count = static_cast<std::uint32_t>(leaf.entries.size());
            level.push_back(std::move(leaf));
        }
    }
    while (level.size() > 1) {
        level = pack_level(std::move(level), max_entries);
    }
    index.root_ = std::move(level.front());
    return index;
}

std::size_t FacilityIndex::range_count(Point2D center, double radius) const {
    return range_count_mbc(center, radius).count;
}

RangeCountResult FacilityIndex::range_count_mbc(Point2D center, double radius) const {
    if (radius < 0.0) {
        throw std::invalid_argument("radius must be non-negative");
    }
    RangeCountResult res;
    if (size_ == 0) {
        return res;
    }
    std::vector<const RtreeNode*> stack{&root_};
    while (!stack.empty()) {
        const RtreeNode* curr = stack.back();
        stack.pop_back();
        ++res.nodes_visited;
        if (curr->is_leaf()) {
            for (const auto& e : curr->entries) {
                if (euclidean(center, e.position) <= radius) {
                    ++res.count;
                }
            }
        } else {
            for (const auto& child : curr->children) {
                if (min_dist(center, child.mbr) <= radius) {
                    if (max_dist(center, child.mbr) <= radius) {
                        res.count += child.count; // fully covered, use stored count
                    } else {
                        stack.push_back(&child);
                    }
                }
            }
        }
    }
    return res;
}

RangeCountResult FacilityIndex::range_count_mbr_only(Point2D center, double radius) const {
    if (radius < 0.0) {
        throw std::invalid_argument("radius must be non-negative");
    }
    RangeCountResult res;
    if (size_ == 0) {
        return res;
    }
    const Mbr query_box{center.x - radius, center.y - radius,
                        center.x + radius, center.y + radius};
    std::vector<const RtreeNode*> stack{&root_};
    while (!stack.empty()) {
        const RtreeNode* curr = stack.back();
        stack.pop_back();
        ++res.nodes_visited;
        if (curr->is_leaf()) {
            for (const auto& e : curr->entries) {
                if (euclidean(center, e.position) <= radius) {
                    ++res.count;
                }
            }
        } else {
            for (const auto& child : curr->children) {
                if (query_box.intersects(child.mbr)) {
                    stack.push_back(&child);
                }
            }
        }
    }
    return res;
}

RangeCountResult FacilityIndex::range_count_stats(Point2D center, double radius,
                                                  RtreeMode mode) const {
    return mode == RtreeMode::kMbc ? range_count_mbc(center, radius)
                                   : range_count_mbr_only(center, radius);
}

bool FacilityIndex::audit() const {
    if (size_ == 0) {
        return root_.is_leaf() && root_.count == 0 && root_.entries.empty();
    }
    if (root_.count != size_) {
        return false;
    }
    return audit_node(root_, max_entries_, true);
}

void FacilityIndex::dump(std::ostream& out) const {
    out << "facility-index size=" << size_ << " max_entries=" << max_entries_ << "\n";
    if (size_ > 0) {
        dump_node(root_, out, 0);
    }
}

} // namespace brknn
