#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "congestion/geometry.hpp"
#include "congestion/quadtree.hpp"
#include "congestion/registration.hpp"

namespace testing_support {

using namespace congestion;

inline double uniform01(std::mt19937_64& gen)
{
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Random segments inside [0,1)^2 with log-uniform lengths, so every scale shows up.
inline std::vector<Segment> random_segments(std::size_t n, std::uint64_t seed,
                                            double min_length = 1e-4, double max_length = 0.9)
{
    std::mt19937_64 gen(seed);
    std::vector<Segment> out;
    while (out.size() < n) {
        const Point a{uniform01(gen), uniform01(gen)};
        const double len = min_length * std::pow(max_length / min_length, uniform01(gen));
        const double theta = 6.283185307179586 * uniform01(gen);
        const Point b{a.x + len * std::cos(theta), a.y + len * std::sin(theta)};
        if (b.x >= 0.0 && b.x < 1.0 && b.y >= 0.0 && b.y < 1.0 && !(a == b))
            out.push_back({a, b});
    }
    return out;
}

/// Random instance family mixing isolated segments, clusters and axis-parallel pieces.
inline std::vector<Segment> mixed_instance(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    auto segs = random_segments(n / 2, seed ^ 0x5eedULL);
    const Point hub{0.2 + 0.6 * uniform01(gen), 0.2 + 0.6 * uniform01(gen)};
    while (segs.size() < n) {
        const double len = 0.01 + 0.15 * uniform01(gen);
        Point a{hub.x + 0.1 * (uniform01(gen) - 0.5), hub.y + 0.1 * (uniform01(gen) - 0.5)};
        Point b = a;
        switch (gen() % 3) {
        case 0:
            b.x += len;
            break;
        case 1:
            b.y += len;
            break;
        default:
            b = {a.x + len * 0.6, a.y - len * 0.8};
        }
        segs.push_back({a, b});
    }
    return segs;
}

/// The segments of S mapped into the frame of shift i, ready to register.
inline std::vector<Segment> to_shift_frame(const std::vector<Segment>& segments, int shift_index)
{
    const Normalization norm = fit_normalization(segments);
    const Point shift = shift_vector(shift_index);
    std::vector<Segment> out;
    for (const Segment& s : segments) {
        const Segment n = norm.apply(s);
        if (n.length() > 0.0)
            out.push_back({n.a + shift, n.b + shift});
    }
    return out;
}

/// QT+ over the endpoint cells of already-shifted segments.
inline RegistrationResult augmented_tree(const std::vector<Segment>& shifted, int alpha,
                                         int shift_index = 0)
{
    std::vector<CanonicalCell> base;
    for (const Segment& s : shifted) {
        base.push_back(cell_of_point(s.a));
        base.push_back(cell_of_point(s.b));
    }
    return build_augmented_quadtree(base, shifted, LongShortThreshold(alpha),
                                    shift_vector(shift_index));
}

/// |a - b| <= tol * max(|a|, |b|), with a 1e-300 floor so that 0 == 0.
inline bool relative_close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + 1e-300;
}

} // namespace testing_support
