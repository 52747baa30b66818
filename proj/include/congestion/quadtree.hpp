#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "congestion/geometry.hpp"

namespace congestion {

/// Deepest level materialized by the quadtrees. The root [0,2)^2 is depth 0 and a
/// cell at depth d has side 2^(1-d), so depth 52 cells have side 2^-51.
inline constexpr int kMaxDepth = 52;

/// Number of shifted quadtrees used in the plane (D + 1 with D = 2).
inline constexpr int kShiftCount = 3;

/// A cell of the infinite quadtree over [0,2)^2, addressed by depth and grid
/// indices. Cells are half-open.
struct CanonicalCell {
    int depth = 0;
    std::uint64_t i = 0;
    std::uint64_t j = 0;

    /// log2 of the side length; the root is level 1.
    int level() const { return 1 - depth; }
    double side() const { return std::ldexp(1.0, 1 - depth); }
    double radius() const { return std::ldexp(1.0, -depth); }
    Box box() const;
    Square square() const;

    bool contains(const CanonicalCell& other) const;
    bool contains(Point p) const;
    CanonicalCell ancestor(int at_depth) const;
    CanonicalCell parent() const { return ancestor(depth - 1); }

    friend auto operator<=>(const CanonicalCell&, const CanonicalCell&) = default;
};

inline constexpr CanonicalCell kRootCell{};

/// Z-order with ancestors before descendants (quadtree pre-order).
bool z_order_less(const CanonicalCell& a, const CanonicalCell& b);

/// Integer sort key realizing z_order_less: the interleaved corner bits (y above x)
/// followed by seven bits of depth.
__extension__ typedef unsigned __int128 ZKey;
ZKey z_order_key(const CanonicalCell& c);
CanonicalCell cell_from_key(ZKey key);

/// Smallest cell containing both cells.
CanonicalCell common_ancestor(const CanonicalCell& a, const CanonicalCell& b);

bool in_domain(Point p);

/// Cell at `depth` containing p. Throws std::domain_error outside [0,2)^2.
CanonicalCell cell_of_point(Point p, int depth = kMaxDepth);

/// Minimal canonical cell containing p and q, capped at kMaxDepth.
CanonicalCell smallest_containing_cell(Point p, Point q);

/// Compressed quadtree stored in pre-order: every node's subtree is the index
/// range [id, subtree_end(id)) and parents precede their children.
class CompressedQuadtree {
public:
    using NodeId = std::int32_t;
    static constexpr NodeId kNone = -1;

    CompressedQuadtree() = default;

    /// Tree containing the root, the max-depth cell of every point, every extra
    /// cell, and the common ancestor of every pair of those cells.
    static CompressedQuadtree build(std::span<const Point> points,
                                    std::span<const CanonicalCell> extra_cells, Point shift = {});

    std::size_t size() const { return cells_.size(); }
    NodeId root() const { return 0; }
    const CanonicalCell& cell(NodeId v) const { return cells_[static_cast<std::size_t>(v)]; }
    std::span<const CanonicalCell> cells() const { return cells_; }
    NodeId parent(NodeId v) const { return parent_[static_cast<std::size_t>(v)]; }
    NodeId subtree_end(NodeId v) const { return end_[static_cast<std::size_t>(v)]; }
    bool is_leaf(NodeId v) const { return subtree_end(v) == v + 1; }
    std::vector<NodeId> children(NodeId v) const;

    /// Node whose cell equals `cell`, if materialized.
    std::optional<NodeId> find(const CanonicalCell& cell) const;
    /// Deepest node whose cell contains p.
    NodeId locate(Point p) const;

    /// Number of edges on the longest root-to-leaf path.
    int height() const;

    /// Shift vector that was added to the input before building.
    Point shift() const { return shift_; }

private:
    std::vector<CanonicalCell> cells_;
    std::vector<ZKey> keys_;
    std::vector<NodeId> parent_;
    std::vector<NodeId> end_;
    Point shift_;
};

/// Shift vector v_i = (i/3, i/3).
Point shift_vector(int i);

/// Smallest cell of the shifted quadtree containing two opposite corners of q.
/// Corners are first clamped into [0,1)^2.
CanonicalCell canonical_cover(const Square& q, Point shift);

/// Builds the three shifted quadtrees over points in [0,1)^2. extra_cells[i] must
/// already be expressed in the frame of shift i.
std::array<CompressedQuadtree, kShiftCount>
shifted_quadtrees(std::span<const Point> points,
                  const std::array<std::vector<CanonicalCell>, kShiftCount>& extra_cells = {});

} // namespace congestion
