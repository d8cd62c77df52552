#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "fball/bigint.hpp"
#include "fball/errors.hpp"

namespace fball {

// lower convex hull of (abscissa, valuation) pairs; segment slopes carry the
// valuations of the roots of the underlying polynomial
struct polygon_segment {
    rational root_val;  // minus the segment slope
    long mult;          // abscissa span = number of roots
    bool principal;     // the span-1 segment breaking at abscissa 1, if any
};

struct newton_polygon {
    std::vector<std::pair<long, rational>> points;    // finite input points
    std::vector<std::pair<long, rational>> vertices;  // lower hull, left to right
    std::vector<polygon_segment> segments;
};

namespace detail {

// cross product sign for hull turns, exact rationals
inline int turn(const std::pair<long, rational>& a, const std::pair<long, rational>& b,
                const std::pair<long, rational>& c) {
    rational lhs = (b.second - a.second) * rational(c.first - a.first);
    rational rhs = (c.second - a.second) * rational(b.first - a.first);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

}  // namespace detail

inline newton_polygon lower_hull(std::vector<std::pair<long, rational>> pts) {
    if (pts.size() < 2) fail(errc::polygon_degenerate, "polygon needs at least two points");
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second < b.second;
    });
    // drop duplicate abscissas, keeping the lowest valuation
    std::vector<std::pair<long, rational>> uniq;
    for (const auto& q : pts)
        if (uniq.empty() || uniq.back().first != q.first) uniq.push_back(q);

    newton_polygon out;
    out.points = uniq;
    for (const auto& q : uniq) {
        while (out.vertices.size() >= 2 &&
               detail::turn(out.vertices[out.vertices.size() - 2], out.vertices.back(), q) >= 0)
            out.vertices.pop_back();
        out.vertices.push_back(q);
    }
    for (size_t i = 0; i + 1 < out.vertices.size(); ++i) {
        const auto& l = out.vertices[i];
        const auto& r = out.vertices[i + 1];
        polygon_segment seg;
        seg.mult = r.first - l.first;
        seg.root_val = (l.second - r.second) / rational(seg.mult);
        seg.principal = (seg.mult == 1 && l.first == 0 && r.first == 1);
        out.segments.push_back(std::move(seg));
    }
    return out;
}

}  // namespace fball
