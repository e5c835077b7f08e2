#pragma once

#include "valuation.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ghost {

struct PolygonPoint {
    std::int64_t x = 0;
    Rational y;
    friend bool operator==(const PolygonPoint&, const PolygonPoint&) = default;
};

struct SlopeRun {
    Rational slope;
    std::int64_t mult = 0;
    friend bool operator==(const SlopeRun&, const SlopeRun&) = default;
};

struct RationalPolygon {
    std::vector<PolygonPoint> points;  // finite input points, ascending x
    std::vector<PolygonPoint> vertices;
    std::vector<PolygonPoint> touch_points;
    std::vector<SlopeRun> slopes;

    bool is_vertex(std::int64_t x) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), x,
                                   [](const PolygonPoint& v, std::int64_t t) { return v.x < t; });
        return it != vertices.end() && it->x == x;
    }

    // hull ordinate at an integer abscissa inside the x-extent
    Rational value_at(std::int64_t x) const {
        if (vertices.empty() || x < vertices.front().x || x > vertices.back().x)
            throw std::out_of_range("abscissa outside the polygon");
        auto it = std::lower_bound(vertices.begin(), vertices.end(), x,
                                   [](const PolygonPoint& v, std::int64_t t) { return v.x < t; });
        if (it->x == x) return it->y;
        auto prev = it - 1;
        return prev->y + (it->y - prev->y) * (x - prev->x) / (it->x - prev->x);
    }

    // slope of the hull on [x-1, x]
    Rational slope_ending_at(std::int64_t x) const { return value_at(x) - value_at(x - 1); }

    // one entry per unit of x-extent
    std::vector<Rational> slope_list() const {
        std::vector<Rational> out;
        for (const auto& run : slopes)
            for (std::int64_t i = 0; i < run.mult; ++i) out.push_back(run.slope);
        return out;
    }

    std::int64_t extent() const { return vertices.empty() ? 0 : vertices.back().x - vertices.front().x; }
};

namespace detail {
// cross product sign of (b - o) x (c - o) for the lower chain
inline Rational cross(const PolygonPoint& o, const PolygonPoint& b, const PolygonPoint& c) {
    return (b.y - o.y) * (c.x - o.x) - (c.y - o.y) * (b.x - o.x);
}
}  // namespace detail

inline RationalPolygon lower_hull_finite(std::vector<PolygonPoint> pts) {
    if (pts.empty()) throw std::invalid_argument("lower_hull: no finite points");
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].x <= pts[i - 1].x) throw std::invalid_argument("lower_hull: x must be strictly increasing");
    RationalPolygon poly;
    poly.points = std::move(pts);
    auto& hull = poly.vertices;
    for (const auto& q : poly.points) {
        // drop the last point while it is on or above the segment from its predecessor to q
        while (hull.size() >= 2 && detail::cross(hull[hull.size() - 2], hull.back(), q) >= 0) hull.pop_back();
        hull.push_back(q);
    }
    for (std::size_t i = 1; i < hull.size(); ++i) {
        std::int64_t dx = hull[i].x - hull[i - 1].x;
        poly.slopes.push_back({(hull[i].y - hull[i - 1].y) / dx, dx});
    }
    std::size_t v = 0;
    for (const auto& q : poly.points) {
        while (v < hull.size() && hull[v].x < q.x) ++v;
        if (v < hull.size() && hull[v].x == q.x) continue;
        if (q.x > hull.front().x && q.x < hull.back().x && poly.value_at(q.x) == q.y) poly.touch_points.push_back(q);
    }
    return poly;
}

// Points with an infinite ordinate impose no constraint and are dropped.
inline RationalPolygon lower_hull(const std::vector<std::pair<std::int64_t, Valuation>>& points) {
    if (points.empty()) throw std::invalid_argument("lower_hull: empty input");
    std::vector<PolygonPoint> finite;
    for (const auto& [x, y] : points)
        if (y.is_finite()) finite.push_back({x, y.value()});
    return lower_hull_finite(std::move(finite));
}

namespace detail {
using I128 = __int128;

inline I128 cross_int(const std::vector<std::pair<std::int64_t, std::int64_t>>& pts, std::size_t o, std::size_t b,
                      std::size_t c) {
    return I128(pts[b].second - pts[o].second) * (pts[c].first - pts[o].first) -
           I128(pts[c].second - pts[o].second) * (pts[b].first - pts[o].first);
}

// indices of the lower hull vertices
inline std::vector<std::size_t> hull_indices(const std::vector<std::pair<std::int64_t, std::int64_t>>& pts) {
    std::vector<std::size_t> hull;
    for (std::size_t q = 0; q < pts.size(); ++q) {
        if (q > 0 && pts[q].first <= pts[q - 1].first)
            throw std::invalid_argument("lower_hull: x must be strictly increasing");
        while (hull.size() >= 2 && cross_int(pts, hull[hull.size() - 2], hull.back(), q) >= 0) hull.pop_back();
        hull.push_back(q);
    }
    return hull;
}
}  // namespace detail

// Same hull for integer data y = Y / scale, with 128-bit cross products.
inline RationalPolygon lower_hull_scaled(const std::vector<std::pair<std::int64_t, std::int64_t>>& pts,
                                         std::int64_t scale = 1) {
    if (pts.empty()) throw std::invalid_argument("lower_hull: no finite points");
    auto hull = detail::hull_indices(pts);
    RationalPolygon poly;
    poly.points.reserve(pts.size());
    for (const auto& [x, y] : pts) poly.points.push_back({x, Rational(y, scale)});
    for (auto i : hull) poly.vertices.push_back(poly.points[i]);
    for (std::size_t i = 1; i < hull.size(); ++i) {
        std::int64_t dx = pts[hull[i]].first - pts[hull[i - 1]].first;
        poly.slopes.push_back({Rational(pts[hull[i]].second - pts[hull[i - 1]].second, scale * dx), dx});
    }
    std::size_t v = 0;
    for (std::size_t q = 0; q < pts.size(); ++q) {
        while (v < hull.size() && hull[v] < q) ++v;
        if (v == hull.size() || hull[v] == q || v == 0) continue;
        if (detail::cross_int(pts, hull[v - 1], q, hull[v]) == 0) poly.touch_points.push_back(poly.points[q]);
    }
    return poly;
}

// r -> nu_r = min_n (v_n + n r) on [r_lo, r_hi]; r_hi infinite on the rightmost piece.
struct DualSegment {
    Rational r_lo;
    Valuation r_hi;
    std::int64_t slope = 0;
    Rational intercept;
};

struct DualGraph {
    std::vector<DualSegment> segments;  // left to right, slopes strictly decreasing

    Rational value_at(const Rational& r) const {
        Rational best;
        bool first = true;
        for (const auto& s : segments) {
            Rational v = s.intercept + r * s.slope;
            if (first || v < best) best = v;
            first = false;
        }
        return best;
    }

    // (abscissa, slope drop) at each join
    std::vector<std::pair<Rational, std::int64_t>> breakpoints() const {
        std::vector<std::pair<Rational, std::int64_t>> out;
        for (std::size_t i = 1; i < segments.size(); ++i)
            out.emplace_back(segments[i].r_lo, segments[i - 1].slope - segments[i].slope);
        return out;
    }
};

inline DualGraph dual_graph(const std::map<std::int64_t, Valuation>& coefficients, const Rational& r_min) {
    std::vector<std::pair<std::int64_t, Valuation>> pts(coefficients.begin(), coefficients.end());
    bool any = std::any_of(pts.begin(), pts.end(), [](const auto& q) { return q.second.is_finite(); });
    if (!any) throw std::invalid_argument("dual_graph: every coefficient has infinite valuation");
    auto np = lower_hull(pts);
    const auto& v = np.vertices;
    DualGraph g;
    // vertex i is the minimizer for r in [-slope_{i+1}, -slope_i]; walk from the last vertex
    for (std::size_t i = v.size(); i-- > 0;) {
        DualSegment s;
        s.slope = v[i].x;
        s.intercept = v[i].y;
        s.r_lo = (i + 1 == v.size()) ? r_min : std::max(r_min, Rational(-np.slopes[i].slope));
        s.r_hi = (i == 0) ? Valuation::infinity() : Valuation(-np.slopes[i - 1].slope);
        if (s.r_hi.is_finite() && s.r_hi.value() <= r_min) continue;
        g.segments.push_back(s);
    }
    return g;
}

// vertices recovered from the dual graph: (slope, intercept) of each segment
inline std::vector<PolygonPoint> vertices_from_dual(const DualGraph& g) {
    std::vector<PolygonPoint> out;
    for (auto it = g.segments.rbegin(); it != g.segments.rend(); ++it) out.push_back({it->slope, it->intercept});
    return out;
}

}  // namespace ghost
