#pragma once

#include <cmath>

namespace dtn {

// World coordinates in meters. Maps are normalized so the min corner is (0,0).
struct Point2D {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2D&) const = default;
};

// sqrt/mul/add are IEEE correctly-rounded, so distances are bit-reproducible.
inline double distance(Point2D a, Point2D b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline Point2D lerp(Point2D a, Point2D b, double t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

// Distance from p to the segment [a, b].
inline double point_segment_distance(Point2D p, Point2D a, Point2D b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return distance(p, a);
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    return distance(p, lerp(a, b, t));
}

} // namespace dtn
