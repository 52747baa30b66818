#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "congestion/geometry.hpp"
#include "congestion/quadtree.hpp"

namespace congestion {

/// Integer constant separating long from short segments: s is long for a square
/// of radius r when |s| >= alpha * r.
class LongShortThreshold {
public:
    static constexpr int kDefault = 8;

    constexpr LongShortThreshold() = default;
    explicit LongShortThreshold(int alpha);

    int alpha() const { return alpha_; }
    bool is_long(double length, double radius) const { return length >= alpha_ * radius; }

private:
    int alpha_ = kDefault;
};

/// Depth of the largest canonical cells for which a segment of this length is
/// long, i.e. the smallest depth with alpha * radius(depth) <= length.
int registration_depth(double length, LongShortThreshold threshold);

/// Cells of the grid at `depth` that s passes through, in walk order. s must lie
/// in [0,2)^2. Cells are half-open; a crossing exactly through a grid corner
/// visits the cell that owns the corner.
std::vector<CanonicalCell> grid_cells_along(const Segment& s, int depth);

/// Interior-disjoint maximal canonical cells for which s is long. Throws
/// std::invalid_argument on a zero-length segment.
std::vector<CanonicalCell> registration_cells(const Segment& s, LongShortThreshold threshold);

/// Per-node segment index lists in compressed row form.
class NodeLists {
public:
    NodeLists() = default;
    NodeLists(std::size_t nodes, std::vector<std::pair<std::int32_t, std::uint32_t>> entries);

    std::span<const std::uint32_t> operator[](std::int32_t node) const
    {
        const auto v = static_cast<std::size_t>(node);
        return {items_.data() + offsets_[v], items_.data() + offsets_[v + 1]};
    }
    std::size_t total() const { return items_.size(); }

private:
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> items_;
};

/// The augmented quadtree QT+ with long lists clL and short lists clS.
struct RegistrationResult {
    CompressedQuadtree tree;
    std::vector<Segment> segments;
    LongShortThreshold threshold;
    NodeLists long_lists;
    NodeLists short_lists;

    std::size_t total_registrations() const { return long_lists.total() + short_lists.total(); }
};

/// Builds QT+ over base_cells plus every registration cell and its parent, then
/// stores each segment in clL of its registration cells and in clS of their
/// parents. Segments must already be in the frame of the tree's shift.
RegistrationResult build_augmented_quadtree(std::span<const CanonicalCell> base_cells,
                                            std::span<const Segment> segments,
                                            LongShortThreshold threshold, Point shift = {});

} // namespace congestion
