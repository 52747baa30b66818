#include "congestion/quadtree.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <stdexcept>
#include <string>

namespace congestion {

namespace {

// Corner coordinates at full resolution: kMaxDepth bits per axis.
std::uint64_t corner_x(const CanonicalCell& c) { return c.i << (kMaxDepth - c.depth); }
std::uint64_t corner_y(const CanonicalCell& c) { return c.j << (kMaxDepth - c.depth); }

bool less_msb(std::uint64_t a, std::uint64_t b) { return a < b && a < (a ^ b); }

constexpr int kDepthBits = 7;

std::uint64_t spread32(std::uint64_t v)
{
    v &= 0xffffffffULL;
    v = (v | (v << 16)) & 0x0000ffff0000ffffULL;
    v = (v | (v << 8)) & 0x00ff00ff00ff00ffULL;
    v = (v | (v << 4)) & 0x0f0f0f0f0f0f0f0fULL;
    v = (v | (v << 2)) & 0x3333333333333333ULL;
    v = (v | (v << 1)) & 0x5555555555555555ULL;
    return v;
}

std::uint64_t compact32(std::uint64_t v)
{
    v &= 0x5555555555555555ULL;
    v = (v | (v >> 1)) & 0x3333333333333333ULL;
    v = (v | (v >> 2)) & 0x0f0f0f0f0f0f0f0fULL;
    v = (v | (v >> 4)) & 0x00ff00ff00ff00ffULL;
    v = (v | (v >> 8)) & 0x0000ffff0000ffffULL;
    v = (v | (v >> 16)) & 0x00000000ffffffffULL;
    return v;
}

ZKey spread(std::uint64_t v)
{
    return (static_cast<ZKey>(spread32(v >> 32)) << 64) | spread32(v);
}

std::uint64_t compact(ZKey v)
{
    return (compact32(static_cast<std::uint64_t>(v >> 64)) << 32) |
           compact32(static_cast<std::uint64_t>(v));
}

int bit_width128(ZKey v)
{
    const auto hi = static_cast<std::uint64_t>(v >> 64);
    return hi != 0 ? 64 + std::bit_width(hi) : std::bit_width(static_cast<std::uint64_t>(v));
}

ZKey key_common_ancestor(ZKey a, ZKey b)
{
    const ZKey depth_mask = (ZKey{1} << kDepthBits) - 1;
    const ZKey ma = a >> kDepthBits;
    int depth = static_cast<int>(std::min(a & depth_mask, b & depth_mask));
    if (const ZKey diff = ma ^ (b >> kDepthBits); diff != 0)
        depth = std::min(depth, kMaxDepth - (bit_width128(diff) + 1) / 2);
    const ZKey below = (ZKey{1} << (2 * (kMaxDepth - depth))) - 1;
    return ((ma & ~below) << kDepthBits) | static_cast<ZKey>(depth);
}

void check_cell(const CanonicalCell& c)
{
    if (c.depth < 0 || c.depth > kMaxDepth)
        throw std::domain_error("canonical cell depth out of range: " + std::to_string(c.depth));
    const std::uint64_t limit = std::uint64_t{1} << c.depth;
    if (c.i >= limit || c.j >= limit)
        throw std::domain_error("canonical cell index outside [0,2)^2");
}

} // namespace

Box CanonicalCell::box() const
{
    const double w = side();
    return {static_cast<double>(i) * w, static_cast<double>(j) * w,
            static_cast<double>(i + 1) * w, static_cast<double>(j + 1) * w};
}

Square CanonicalCell::square() const
{
    const double r = radius();
    const double w = side();
    return {{static_cast<double>(i) * w + r, static_cast<double>(j) * w + r}, r};
}

bool CanonicalCell::contains(const CanonicalCell& other) const
{
    if (other.depth < depth)
        return false;
    const int shift = other.depth - depth;
    return (other.i >> shift) == i && (other.j >> shift) == j;
}

bool CanonicalCell::contains(Point p) const
{
    const Box b = box();
    return b.xmin <= p.x && p.x < b.xmax && b.ymin <= p.y && p.y < b.ymax;
}

CanonicalCell CanonicalCell::ancestor(int at_depth) const
{
    const int shift = depth - at_depth;
    return {at_depth, i >> shift, j >> shift};
}

bool z_order_less(const CanonicalCell& a, const CanonicalCell& b)
{
    const std::uint64_t ax = corner_x(a), ay = corner_y(a);
    const std::uint64_t bx = corner_x(b), by = corner_y(b);
    const std::uint64_t dx = ax ^ bx;
    const std::uint64_t dy = ay ^ by;
    if (dx == 0 && dy == 0)
        return a.depth < b.depth;
    // y bits sit above x bits in the interleaving.
    if (less_msb(dy, dx))
        return ax < bx;
    return ay < by;
}

ZKey z_order_key(const CanonicalCell& c)
{
    const ZKey morton = (spread(corner_y(c)) << 1) | spread(corner_x(c));
    return (morton << kDepthBits) | static_cast<ZKey>(c.depth);
}

CanonicalCell cell_from_key(ZKey key)
{
    const int depth = static_cast<int>(key & ((ZKey{1} << kDepthBits) - 1));
    const ZKey morton = key >> kDepthBits;
    const int shift = kMaxDepth - depth;
    return {depth, compact(morton) >> shift, compact(morton >> 1) >> shift};
}

CanonicalCell common_ancestor(const CanonicalCell& a, const CanonicalCell& b)
{
    const std::uint64_t diff = (corner_x(a) ^ corner_x(b)) | (corner_y(a) ^ corner_y(b));
    int depth = std::min(a.depth, b.depth);
    if (diff != 0)
        depth = std::min(depth, kMaxDepth - static_cast<int>(std::bit_width(diff)));
    return a.ancestor(depth);
}

bool in_domain(Point p)
{
    return p.x >= 0.0 && p.x < 2.0 && p.y >= 0.0 && p.y < 2.0;
}

CanonicalCell cell_of_point(Point p, int depth)
{
    if (!in_domain(p))
        throw std::domain_error("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                ") outside quadtree domain [0,2)^2");
    const auto i = static_cast<std::uint64_t>(std::ldexp(p.x, kMaxDepth - 1));
    const auto j = static_cast<std::uint64_t>(std::ldexp(p.y, kMaxDepth - 1));
    return CanonicalCell{kMaxDepth, i, j}.ancestor(depth);
}

CanonicalCell smallest_containing_cell(Point p, Point q)
{
    return common_ancestor(cell_of_point(p), cell_of_point(q));
}

CompressedQuadtree CompressedQuadtree::build(std::span<const Point> points,
                                             std::span<const CanonicalCell> extra_cells, Point shift)
{
    std::vector<ZKey> keys;
    keys.reserve(points.size() + extra_cells.size() + 1);
    keys.push_back(z_order_key(kRootCell));
    for (const Point& p : points)
        keys.push_back(z_order_key(cell_of_point(p)));
    for (const CanonicalCell& c : extra_cells) {
        check_cell(c);
        keys.push_back(z_order_key(c));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    // Pairwise common ancestors of a Z-sorted set are those of consecutive cells.
    std::vector<ZKey> ancestors;
    ancestors.reserve(keys.size());
    for (std::size_t k = 1; k < keys.size(); ++k)
        ancestors.push_back(key_common_ancestor(keys[k - 1], keys[k]));
    std::sort(ancestors.begin(), ancestors.end());

    CompressedQuadtree tree;
    tree.keys_.reserve(keys.size() + ancestors.size());
    std::merge(keys.begin(), keys.end(), ancestors.begin(), ancestors.end(),
               std::back_inserter(tree.keys_));
    tree.keys_.erase(std::unique(tree.keys_.begin(), tree.keys_.end()), tree.keys_.end());
    tree.keys_.shrink_to_fit();
    keys = {};
    ancestors = {};

    tree.shift_ = shift;
    tree.cells_.resize(tree.keys_.size());
    std::transform(tree.keys_.begin(), tree.keys_.end(), tree.cells_.begin(), cell_from_key);
    const auto n = static_cast<NodeId>(tree.cells_.size());
    tree.parent_.assign(tree.cells_.size(), kNone);
    tree.end_.assign(tree.cells_.size(), n);

    std::vector<NodeId> stack;
    for (NodeId v = 0; v < n; ++v) {
        while (!stack.empty() && !tree.cell(stack.back()).contains(tree.cell(v))) {
            tree.end_[static_cast<std::size_t>(stack.back())] = v;
            stack.pop_back();
        }
        if (!stack.empty())
            tree.parent_[static_cast<std::size_t>(v)] = stack.back();
        stack.push_back(v);
    }
    return tree;
}

std::vector<CompressedQuadtree::NodeId> CompressedQuadtree::children(NodeId v) const
{
    std::vector<NodeId> out;
    for (NodeId c = v + 1; c < subtree_end(v); c = subtree_end(c))
        out.push_back(c);
    return out;
}

std::optional<CompressedQuadtree::NodeId> CompressedQuadtree::find(const CanonicalCell& cell) const
{
    const ZKey key = z_order_key(cell);
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key)
        return std::nullopt;
    return static_cast<NodeId>(it - keys_.begin());
}

CompressedQuadtree::NodeId CompressedQuadtree::locate(Point p) const
{
    const CanonicalCell target = cell_of_point(p);
    NodeId v = root();
    for (;;) {
        NodeId next = kNone;
        for (NodeId c = v + 1; c < subtree_end(v); c = subtree_end(c)) {
            if (cell(c).contains(target)) {
                next = c;
                break;
            }
        }
        if (next == kNone)
            return v;
        v = next;
    }
}

int CompressedQuadtree::height() const
{
    std::vector<int> depth(size(), 0);
    int best = 0;
    for (NodeId v = 1; v < static_cast<NodeId>(size()); ++v) {
        depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(parent(v))] + 1;
        best = std::max(best, depth[static_cast<std::size_t>(v)]);
    }
    return best;
}

Point shift_vector(int i)
{
    const double s = static_cast<double>(i) / kShiftCount;
    return {s, s};
}

CanonicalCell canonical_cover(const Square& q, Point shift)
{
    const double hi = std::nextafter(1.0, 0.0);
    const Box b = q.box();
    const Point lo_corner{std::clamp(b.xmin, 0.0, hi), std::clamp(b.ymin, 0.0, hi)};
    const Point hi_corner{std::clamp(b.xmax, 0.0, hi), std::clamp(b.ymax, 0.0, hi)};
    return smallest_containing_cell(lo_corner + shift, hi_corner + shift);
}

std::array<CompressedQuadtree, kShiftCount>
shifted_quadtrees(std::span<const Point> points,
                  const std::array<std::vector<CanonicalCell>, kShiftCount>& extra_cells)
{
    for (const Point& p : points)
        if (!(p.x >= 0.0 && p.x < 1.0 && p.y >= 0.0 && p.y < 1.0))
            throw std::domain_error("shifted quadtrees need points in [0,1)^2");

    std::array<CompressedQuadtree, kShiftCount> trees;
    std::vector<Point> shifted(points.size());
    for (int i = 0; i < kShiftCount; ++i) {
        const Point v = shift_vector(i);
        std::transform(points.begin(), points.end(), shifted.begin(),
                       [&](Point p) { return p + v; });
        trees[static_cast<std::size_t>(i)] =
            CompressedQuadtree::build(shifted, extra_cells[static_cast<std::size_t>(i)], v);
    }
    return trees;
}

} // namespace congestion
