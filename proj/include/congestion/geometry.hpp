#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace congestion {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point p, Point q) { return {p.x + q.x, p.y + q.y}; }
    friend Point operator-(Point p, Point q) { return {p.x - q.x, p.y - q.y}; }
    friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point, Point) = default;

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

inline double linf_distance(Point p, Point q)
{
    return std::max(std::abs(p.x - q.x), std::abs(p.y - q.y));
}

struct Segment {
    Point a;
    Point b;

    double length() const { return distance(a, b); }
    Point at(double t) const;
    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Axis-parallel box. Whether the upper edges belong to the box depends on the
/// predicate used: `clip_*` treat it as closed, `*_half_open` exclude xmax/ymax.
struct Box {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;
};

/// An L-infinity ball: the axis-parallel square of side 2*radius around center.
struct Square {
    Point center;
    double radius = 0.0;

    double side() const { return 2.0 * radius; }
    Box box() const
    {
        return {center.x - radius, center.y - radius, center.x + radius, center.y + radius};
    }
    /// Half-open membership, matching grid cells.
    bool contains(Point p) const
    {
        return center.x - radius <= p.x && p.x < center.x + radius && center.y - radius <= p.y &&
               p.y < center.y + radius;
    }
};

/// Parameter interval [t0, t1] of the part of s inside the closed box (Liang-Barsky).
struct ClipRange {
    double t0 = 0.0;
    double t1 = 0.0;
};
std::optional<ClipRange> clip_range(const Segment& s, const Box& box);

/// s clipped to the closed square. A clip that degenerates to a single point is absent.
std::optional<Segment> clip_segment_to_square(const Segment& s, const Square& q);

/// Length of s inside the closed box.
double clipped_length(const Segment& s, const Box& box);

/// True when s meets the closed square (touching counts).
bool intersects(const Segment& s, const Square& q);

/// Total clipped length of S inside q divided by q.radius.
double square_congestion(std::span<const Segment> segments, const Square& q);

std::vector<Segment> segments_intersecting_square(std::span<const Segment> segments, const Square& q);

/// Intersection with the half-open box [xmin, xmax) x [ymin, ymax). Quadtree cells
/// partition the plane under this convention, so conflict lists never double count.
bool intersects_half_open(const Segment& s, const Box& box);
double half_open_length(const Segment& s, const Box& box);

/// Similarity map x -> 0.25 + scale * (x - origin) with a power-of-two scale,
/// taking a segment set into [0.25, 0.75)^2. Congestion is invariant under it.
struct Normalization {
    Point origin;
    double scale = 1.0;

    Point apply(Point p) const { return {0.25 + scale * (p.x - origin.x), 0.25 + scale * (p.y - origin.y)}; }
    Segment apply(const Segment& s) const { return {apply(s.a), apply(s.b)}; }
    Point invert(Point p) const { return {origin.x + (p.x - 0.25) / scale, origin.y + (p.y - 0.25) / scale}; }
    Square invert(const Square& q) const { return {invert(q.center), q.radius / scale}; }
};

Normalization fit_normalization(std::span<const Segment> segments);

/// Neumaier summation.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            compensation_ += (sum_ - t) + v;
        else
            compensation_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

} // namespace congestion
