#include "instances.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace congestion::instances {

namespace {

double uniform01(std::mt19937_64& gen)
{
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

Point unit_direction(std::mt19937_64& gen)
{
    const double theta = 2.0 * std::numbers::pi * uniform01(gen);
    return {std::cos(theta), std::sin(theta)};
}

} // namespace

std::vector<Segment> random_walk(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::vector<Segment> out;
    out.reserve(n);
    Point at{};
    while (out.size() < n) {
        const double len = 1.0 - uniform01(gen);
        const Point next = at + len * unit_direction(gen);
        out.push_back({at, next});
        at = next;
    }
    return out;
}

std::vector<Segment> zigzag(std::size_t k, double h)
{
    std::vector<Segment> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double x0 = static_cast<double>(i % 2);
        const double x1 = static_cast<double>((i + 1) % 2);
        out.push_back({{x0, static_cast<double>(i) * h}, {x1, static_cast<double>(i + 1) * h}});
    }
    return out;
}

std::vector<Segment> k_star(std::size_t k, Point center)
{
    std::vector<Segment> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (i % 2 == 0)
            out.push_back({{center.x - 0.5, center.y}, {center.x + 0.5, center.y}});
        else
            out.push_back({{center.x, center.y - 0.5}, {center.x, center.y + 0.5}});
    }
    return out;
}

std::vector<Segment> uniform_random_segments(std::size_t n, std::uint64_t seed, double min_length,
                                             double max_length)
{
    std::mt19937_64 gen(seed);
    std::vector<Segment> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point a{uniform01(gen), uniform01(gen)};
        const double len = min_length + (max_length - min_length) * uniform01(gen);
        out.push_back({a, a + len * unit_direction(gen)});
    }
    return out;
}

std::vector<Segment> star_through_point(std::size_t n, std::uint64_t seed, Point center)
{
    std::mt19937_64 gen(seed);
    std::vector<Segment> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point d = unit_direction(gen);
        const double before = 0.2 + 0.6 * uniform01(gen);
        out.push_back({center - before * d, center + (1.0 - before) * d});
    }
    return out;
}

std::vector<Segment> polyline_segments(const std::vector<Point>& vertices)
{
    std::vector<Segment> out;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        out.push_back({vertices[i - 1], vertices[i]});
    return out;
}

} // namespace congestion::instances
