#pragma once

#include "hybplan/errors.hpp"

#include <span>
#include <vector>

namespace hybplan::geom {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

// Convex polygon, counter-clockwise, lexicographically smallest vertex first.
// Degenerates to a 2-point segment or a single point.
struct Polygon {
    std::vector<Point> vertices;
};

// Sign of the cross product (b-a) x (c-a): +1 ccw, -1 cw, 0 collinear.
// Exact for integer-valued coordinates.
int orientation(const Point& a, const Point& b, const Point& c);

// p within the closed axis-aligned box spanned by a and b.
bool on_segment(const Point& a, const Point& b, const Point& p);

Polygon convex_hull(std::span<const Point> points); // throws EmptyInput

// Boundary-inclusive containment; hull must come from convex_hull.
bool point_in_hull(const Point& p, const Polygon& hull);

// Closed segments share at least one point (touching endpoints count).
bool segments_intersect(const Point& a1, const Point& a2,
                        const Point& b1, const Point& b2);

// Closed segment vs the closed unit square [cx,cx+1] x [cy,cy+1].
bool segment_intersects_cell(const Point& a, const Point& b, int cx, int cy);

double distance(const Point& a, const Point& b);

} // namespace hybplan::geom
