#include "hybplan/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace hybplan::geom {

namespace {

bool integral(double v) {
    return std::nearbyint(v) == v && std::abs(v) < 1e9;
}

} // namespace

int orientation(const Point& a, const Point& b, const Point& c) {
    if (integral(a.x) && integral(a.y) && integral(b.x) && integral(b.y) &&
        integral(c.x) && integral(c.y)) {
        // exact integer cross product, no epsilon on grid inputs
        long long ax = static_cast<long long>(a.x), ay = static_cast<long long>(a.y);
        long long bx = static_cast<long long>(b.x), by = static_cast<long long>(b.y);
        long long cx = static_cast<long long>(c.x), cy = static_cast<long long>(c.y);
        long long cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        return cross > 0 ? 1 : cross < 0 ? -1 : 0;
    }
    long double cross = (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
                        (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
    return cross > 0 ? 1 : cross < 0 ? -1 : 0;
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

Polygon convex_hull(std::span<const Point> points) {
    if (points.empty())
        throw EmptyInput("convex_hull of no points");

    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Point& l, const Point& r) {
        return l.x < r.x || (l.x == r.x && l.y < r.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    if (pts.size() == 1)
        return Polygon{{pts[0]}};

    // monotone chain; strict turns drop collinear interior points
    auto build = [&pts](std::vector<Point>& chain, bool lower) {
        for (std::size_t idx = 0; idx < pts.size(); ++idx) {
            const Point& p = lower ? pts[idx] : pts[pts.size() - 1 - idx];
            while (chain.size() >= 2 &&
                   orientation(chain[chain.size() - 2], chain.back(), p) <= 0)
                chain.pop_back();
            chain.push_back(p);
        }
    };
    std::vector<Point> lower, upper;
    build(lower, true);
    build(upper, false);

    if (lower.size() == 2 && upper.size() == 2)
        return Polygon{{lower[0], lower[1]}}; // collinear input: a segment

    Polygon hull;
    hull.vertices.assign(lower.begin(), lower.end() - 1);
    hull.vertices.insert(hull.vertices.end(), upper.begin(), upper.end() - 1);
    return hull;
}

bool point_in_hull(const Point& p, const Polygon& hull) {
    const auto& v = hull.vertices;
    if (v.empty())
        return false;
    if (v.size() == 1)
        return p == v[0];
    if (v.size() == 2)
        return orientation(v[0], v[1], p) == 0 && on_segment(v[0], v[1], p);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        if (orientation(a, b, p) < 0)
            return false;
    }
    return true;
}

bool segments_intersect(const Point& a1, const Point& a2,
                        const Point& b1, const Point& b2) {
    int o1 = orientation(a1, a2, b1);
    int o2 = orientation(a1, a2, b2);
    int o3 = orientation(b1, b2, a1);
    int o4 = orientation(b1, b2, a2);

    if (o1 != o2 && o3 != o4)
        return true;
    if (o1 == 0 && on_segment(a1, a2, b1)) return true;
    if (o2 == 0 && on_segment(a1, a2, b2)) return true;
    if (o3 == 0 && on_segment(b1, b2, a1)) return true;
    if (o4 == 0 && on_segment(b1, b2, a2)) return true;
    return false;
}

bool segment_intersects_cell(const Point& a, const Point& b, int cx, int cy) {
    const double x0 = cx, x1 = cx + 1.0, y0 = cy, y1 = cy + 1.0;
    auto inside = [&](const Point& p) {
        return x0 <= p.x && p.x <= x1 && y0 <= p.y && p.y <= y1;
    };
    if (inside(a) || inside(b))
        return true;
    const Point c00{x0, y0}, c10{x1, y0}, c11{x1, y1}, c01{x0, y1};
    return segments_intersect(a, b, c00, c10) ||
           segments_intersect(a, b, c10, c11) ||
           segments_intersect(a, b, c11, c01) ||
           segments_intersect(a, b, c01, c00);
}

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace hybplan::geom
