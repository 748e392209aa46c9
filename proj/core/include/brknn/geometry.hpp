#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace brknn {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline double euclidean(Point2D a, Point2D b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Axis-aligned bounding rectangle. Leaf entries of the facility index use
/// degenerate (point) rectangles.
struct Mbr {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    bool valid() const { return min_x <= max_x && min_y <= max_y; }

    void expand(Point2D p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }

    void expand(const Mbr& other) {
        min_x = std::min(min_x, other.min_x);
        min_y = std::min(min_y, other.min_y);
        max_x = std::max(max_x, other.max_x);
        max_y = std::max(max_y, other.max_y);
    }

    bool contains(Point2D p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }

    bool contains(const Mbr& other) const {
        return other.min_x >= min_x && other.max_x <= max_x &&
               other.min_y >= min_y && other.max_y <= max_y;
    }

    bool intersects(const Mbr& other) const {
        return other.min_x <= max_x && other.max_x >= min_x &&
               other.min_y <= max_y && other.max_y >= min_y;
    }

    Point2D center() const { return {(min_x + max_x) * 0.5, (min_y + max_y) * 0.5}; }
};

/// Distance from a point to the nearest point of the rectangle; 0 when inside.
inline double min_dist(Point2D center, const Mbr& box) {
    const double dx = std::max({box.min_x - center.x, 0.0, center.x - box.max_x});
    const double dy = std::max({box.min_y - center.y, 0.0, center.y - box.max_y});
    return std::sqrt(dx * dx + dy * dy);
}

/// Distance from a point to the farthest corner of the rectangle.
inline double max_dist(Point2D center, const Mbr& box) {
    const double dx = std::max(std::abs(center.x - box.min_x), std::abs(center.x - box.max_x));
    const double dy = std::max(std::abs(center.y - box.min_y), std::abs(center.y - box.max_y));
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace brknn
