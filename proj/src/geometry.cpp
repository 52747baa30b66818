#include "congestion/geometry.hpp"

namespace congestion {

Point Segment::at(double t) const
{
    if (t == 0.0)
        return a;
    if (t == 1.0)
        return b;
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

std::optional<ClipRange> clip_range(const Segment& s, const Box& box)
{
    const double dx = s.b.x - s.a.x;
    const double dy = s.b.y - s.a.y;
    double t0 = 0.0;
    double t1 = 1.0;

    // Constraint p * t <= q for one box edge.
    auto edge = [&](double p, double q) {
        if (p == 0.0)
            return q >= 0.0;
        const double r = q / p;
        if (p < 0.0) {
            if (r > t1)
                return false;
            if (r > t0)
                t0 = r;
        } else {
            if (r < t0)
                return false;
            if (r < t1)
                t1 = r;
        }
        return true;
    };

    if (!edge(-dx, s.a.x - box.xmin) || !edge(dx, box.xmax - s.a.x) ||
        !edge(-dy, s.a.y - box.ymin) || !edge(dy, box.ymax - s.a.y))
        return std::nullopt;
    return ClipRange{t0, t1};
}

std::optional<Segment> clip_segment_to_square(const Segment& s, const Square& q)
{
    const Box box = q.box();
    const auto range = clip_range(s, box);
    if (!range || !(range->t1 > range->t0))
        return std::nullopt;

    auto clamp = [&](Point p) {
        return Point{std::clamp(p.x, box.xmin, box.xmax), std::clamp(p.y, box.ymin, box.ymax)};
    };
    return Segment{clamp(s.at(range->t0)), clamp(s.at(range->t1))};
}

double clipped_length(const Segment& s, const Box& box)
{
    const auto range = clip_range(s, box);
    if (!range || !(range->t1 > range->t0))
        return 0.0;
    return (range->t1 - range->t0) * s.length();
}

bool intersects(const Segment& s, const Square& q)
{
    return clip_range(s, q.box()).has_value();
}

double square_congestion(std::span<const Segment> segments, const Square& q)
{
    const Box box = q.box();
    CompensatedSum total;
    for (const Segment& s : segments)
        total.add(clipped_length(s, box));
    return total.value() / q.radius;
}

std::vector<Segment> segments_intersecting_square(std::span<const Segment> segments, const Square& q)
{
    std::vector<Segment> out;
    for (const Segment& s : segments)
        if (intersects(s, q))
            out.push_back(s);
    return out;
}

namespace {

std::optional<ClipRange> half_open_range(const Segment& s, const Box& box)
{
    const auto range = clip_range(s, box);
    if (!range)
        return std::nullopt;
    if (range->t1 > range->t0) {
        // A piece of positive length is lost only if it runs along an excluded edge.
        if (s.a.x == s.b.x && s.a.x == box.xmax)
            return std::nullopt;
        if (s.a.y == s.b.y && s.a.y == box.ymax)
            return std::nullopt;
        return range;
    }
    const Point p = s.at(range->t0);
    if (p.x < box.xmax && p.y < box.ymax)
        return range;
    return std::nullopt;
}

} // namespace

bool intersects_half_open(const Segment& s, const Box& box)
{
    return half_open_range(s, box).has_value();
}

double half_open_length(const Segment& s, const Box& box)
{
    const auto range = half_open_range(s, box);
    if (!range)
        return 0.0;
    return (range->t1 - range->t0) * s.length();
}

Normalization fit_normalization(std::span<const Segment> segments)
{
    Normalization norm;
    if (segments.empty())
        return norm;
    double xmin = segments[0].a.x, xmax = xmin;
    double ymin = segments[0].a.y, ymax = ymin;
    for (const Segment& s : segments) {
        for (const Point p : {s.a, s.b}) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    norm.origin = {xmin, ymin};
    const double extent = std::max(xmax - xmin, ymax - ymin);
    if (!(extent > 0.0))
        return norm;
    // Largest power of two with scale * extent < 1/2.
    double scale = std::exp2(std::floor(std::log2(0.5 / extent)));
    while (scale * extent >= 0.5)
        scale *= 0.5;
    while (2.0 * scale * extent < 0.5)
        scale *= 2.0;
    norm.scale = scale;
    return norm;
}

} // namespace congestion
