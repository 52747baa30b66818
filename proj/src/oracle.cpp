#include "congestion/oracle.hpp"

#include <algorithm>
#include <string>

namespace congestion::oracle {

namespace {

using NodeId = CompressedQuadtree::NodeId;

void check_cap(std::span<const Segment> segments, std::size_t cap)
{
    if (segments.size() > cap)
        throw CapExceeded("oracle refuses " + std::to_string(segments.size()) +
                          " segments (cap " + std::to_string(cap) + ")");
}

} // namespace

std::vector<std::vector<std::uint32_t>> conflict_lists(const CompressedQuadtree& tree,
                                                       std::span<const Segment> segments,
                                                       std::size_t cap)
{
    check_cap(segments, cap);
    std::vector<std::vector<std::uint32_t>> lists(tree.size());
    const Box root_box = tree.cell(tree.root()).box();
    for (std::uint32_t k = 0; k < segments.size(); ++k)
        if (intersects_half_open(segments[k], root_box))
            lists[0].push_back(k);
    for (NodeId v = 1; v < static_cast<NodeId>(tree.size()); ++v) {
        const Box box = tree.cell(v).box();
        const auto& from = lists[static_cast<std::size_t>(tree.parent(v))];
        auto& to = lists[static_cast<std::size_t>(v)];
        for (const std::uint32_t k : from)
            if (intersects_half_open(segments[k], box))
                to.push_back(k);
    }
    return lists;
}

NodeCongestion naive_quadtree_congestion(const CompressedQuadtree& tree,
                                         std::span<const Segment> segments,
                                         LongShortThreshold threshold, std::size_t cap)
{
    const auto lists = conflict_lists(tree, segments, cap);
    NodeCongestion out;
    out.total.resize(tree.size());
    out.short_congestion.resize(tree.size());
    out.long_congestion.resize(tree.size());
    out.long_count.resize(tree.size());
    for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
        const auto idx = static_cast<std::size_t>(v);
        const CanonicalCell& cell = tree.cell(v);
        const Box box = cell.box();
        const double r = cell.radius();
        CompensatedSum all;
        CompensatedSum shorts;
        CompensatedSum longs;
        for (const std::uint32_t k : lists[idx]) {
            const double len = half_open_length(segments[k], box);
            all.add(len);
            if (threshold.is_long(segments[k].length(), r)) {
                longs.add(len);
                ++out.long_count[idx];
            } else {
                shorts.add(len);
            }
        }
        out.total[idx] = all.value() / r;
        out.short_congestion[idx] = shorts.value() / r;
        out.long_congestion[idx] = longs.value() / r;
        out.max_total = std::max(out.max_total, out.total[idx]);
    }
    return out;
}

std::uint32_t naive_max_conflict(const CompressedQuadtree& tree, std::span<const Segment> segments,
                                 LongShortThreshold threshold, std::size_t cap)
{
    const NodeCongestion nc = naive_quadtree_congestion(tree, segments, threshold, cap);
    if (nc.long_count.empty())
        return 0;
    return *std::max_element(nc.long_count.begin(), nc.long_count.end());
}

CandidateSquareSet DenseGridCandidateGenerator::generate(std::span<const Segment> segments,
                                                         double eps) const
{
    CandidateSquareSet result;
    result.eps = eps;
    if (segments.empty() || options_.resolution < 1 || options_.radius_levels < 1)
        return result;

    Box bounds{segments[0].a.x, segments[0].a.y, segments[0].a.x, segments[0].a.y};
    for (const Segment& s : segments)
        for (const Point p : {s.a, s.b}) {
            bounds.xmin = std::min(bounds.xmin, p.x);
            bounds.ymin = std::min(bounds.ymin, p.y);
            bounds.xmax = std::max(bounds.xmax, p.x);
            bounds.ymax = std::max(bounds.ymax, p.y);
        }
    const double extent = std::max(bounds.xmax - bounds.xmin, bounds.ymax - bounds.ymin);
    if (!(extent > 0.0))
        return result;

    const int res = options_.resolution;
    result.squares.reserve(static_cast<std::size_t>(res + 1) * static_cast<std::size_t>(res + 1) *
                           static_cast<std::size_t>(options_.radius_levels));
    for (int i = 0; i <= res; ++i)
        for (int j = 0; j <= res; ++j) {
            const Point c{bounds.xmin + extent * i / res, bounds.ymin + extent * j / res};
            for (int k = 0; k < options_.radius_levels; ++k)
                result.squares.push_back({c, std::ldexp(0.5 * extent, -k)});
        }
    return result;
}

double dense_grid_congestion_lower_bound(std::span<const Segment> segments, DenseGridOptions options)
{
    std::vector<Segment> nonzero;
    nonzero.reserve(segments.size());
    for (const Segment& s : segments)
        if (s.length() > 0.0)
            nonzero.push_back(s);
    return DenseGridCandidateGenerator(options).generate(nonzero, kDefaultEps).max_congestion(nonzero);
}

OracleBracket dense_grid_bracket(std::span<const Segment> segments, DenseGridOptions options,
                                 std::optional<double> analytic_upper)
{
    return {dense_grid_congestion_lower_bound(segments, options), analytic_upper};
}

} // namespace congestion::oracle
