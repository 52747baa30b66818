#pragma once

// Seed-deterministic instance families shared by the CLI and the tests.

#include <cstdint>
#include <vector>

#include "congestion/geometry.hpp"

namespace congestion::instances {

/// Polyline of n segments; each step has a uniform direction and a length in (0, 1].
std::vector<Segment> random_walk(std::size_t n, std::uint64_t seed);

/// Segments (i mod 2, i h) -> ((i+1) mod 2, (i+1) h); cong = 2k sqrt(1 + h^2) when k h <= 1.
std::vector<Segment> zigzag(std::size_t k, double h);

/// k unit segments centered at `center`, alternately horizontal and vertical; cong = 2k.
std::vector<Segment> k_star(std::size_t k, Point center = {0.5, 0.5});

/// Segments with uniform endpoints a in [0,1)^2 and b = a + direction * length,
/// length uniform in [min_length, max_length].
std::vector<Segment> uniform_random_segments(std::size_t n, std::uint64_t seed,
                                             double min_length = 1e-3, double max_length = 0.5);

/// n unit segments through `center` at uniform angles, each split by the center at
/// a uniform fraction in [0.2, 0.8]. Every segment meets every cell containing the center.
std::vector<Segment> star_through_point(std::size_t n, std::uint64_t seed,
                                        Point center = {0.43, 0.57});

std::vector<Segment> polyline_segments(const std::vector<Point>& vertices);

} // namespace congestion::instances
