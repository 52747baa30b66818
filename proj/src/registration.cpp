#include "congestion/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace congestion {

LongShortThreshold::LongShortThreshold(int alpha) : alpha_(alpha)
{
    if (alpha < 1)
        throw std::invalid_argument("alpha must be an integer >= 1, got " + std::to_string(alpha));
}

int registration_depth(double length, LongShortThreshold threshold)
{
    const double ratio = length / threshold.alpha();
    int depth = static_cast<int>(std::ceil(-std::log2(ratio)));
    depth = std::clamp(depth, 0, kMaxDepth);
    // log2 may be off by one near powers of two; settle it with exact products.
    auto fits = [&](int d) { return threshold.is_long(length, std::ldexp(1.0, -d)); };
    while (depth < kMaxDepth && !fits(depth))
        ++depth;
    while (depth > 0 && fits(depth - 1))
        --depth;
    return depth;
}

std::vector<CanonicalCell> grid_cells_along(const Segment& s, int depth)
{
    if (!in_domain(s.a) || !in_domain(s.b))
        throw std::domain_error("segment outside quadtree domain [0,2)^2");

    const double ux0 = std::ldexp(s.a.x, depth - 1);
    const double uy0 = std::ldexp(s.a.y, depth - 1);
    const double ux1 = std::ldexp(s.b.x, depth - 1);
    const double uy1 = std::ldexp(s.b.y, depth - 1);

    auto i = static_cast<std::int64_t>(std::floor(ux0));
    auto j = static_cast<std::int64_t>(std::floor(uy0));
    const auto ie = static_cast<std::int64_t>(std::floor(ux1));
    const auto je = static_cast<std::int64_t>(std::floor(uy1));

    std::vector<CanonicalCell> cells;
    auto emit = [&](std::int64_t ci, std::int64_t cj) {
        cells.push_back({depth, static_cast<std::uint64_t>(ci), static_cast<std::uint64_t>(cj)});
    };
    emit(i, j);

    constexpr double inf = std::numeric_limits<double>::infinity();
    const double dx = ux1 - ux0;
    const double dy = uy1 - uy0;
    const int sx = (dx > 0) - (dx < 0);
    const int sy = (dy > 0) - (dy < 0);
    double tx = sx > 0 ? (static_cast<double>(i + 1) - ux0) / dx
                       : (sx < 0 ? (static_cast<double>(i) - ux0) / dx : inf);
    double ty = sy > 0 ? (static_cast<double>(j + 1) - uy0) / dy
                       : (sy < 0 ? (static_cast<double>(j) - uy0) / dy : inf);
    const double step_tx = sx != 0 ? 1.0 / std::abs(dx) : inf;
    const double step_ty = sy != 0 ? 1.0 / std::abs(dy) : inf;

    // Each step moves one index toward its end value, so the walk terminates
    // exactly at the end cell even when crossing times are slightly off.
    while (i != ie || j != je) {
        bool step_x = false;
        bool step_y = false;
        if (i == ie)
            step_y = true;
        else if (j == je)
            step_x = true;
        else if (tx < ty)
            step_x = true;
        else if (ty < tx)
            step_y = true;
        else
            step_x = step_y = true;

        if (step_x && step_y) {
            const std::int64_t ci = sx > 0 ? i + 1 : i;
            const std::int64_t cj = sy > 0 ? j + 1 : j;
            if (!(ci == i && cj == j) && !(ci == i + sx && cj == j + sy))
                emit(ci, cj);
        }
        if (step_x) {
            i += sx;
            tx += step_tx;
        }
        if (step_y) {
            j += sy;
            ty += step_ty;
        }
        emit(i, j);
    }
    return cells;
}

std::vector<CanonicalCell> registration_cells(const Segment& s, LongShortThreshold threshold)
{
    const double length = s.length();
    if (!(length > 0.0))
        throw std::invalid_argument("cannot register a zero-length segment");
    const int depth = registration_depth(length, threshold);
    if (depth == 0)
        return {kRootCell};
    return grid_cells_along(s, depth);
}

NodeLists::NodeLists(std::size_t nodes, std::vector<std::pair<std::int32_t, std::uint32_t>> entries)
    : offsets_(nodes + 1, 0), items_(entries.size())
{
    for (const auto& [node, _] : entries)
        ++offsets_[static_cast<std::size_t>(node) + 1];
    for (std::size_t v = 0; v < nodes; ++v)
        offsets_[v + 1] += offsets_[v];
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [node, item] : entries)
        items_[cursor[static_cast<std::size_t>(node)]++] = item;
}

RegistrationResult build_augmented_quadtree(std::span<const CanonicalCell> base_cells,
                                            std::span<const Segment> segments,
                                            LongShortThreshold threshold, Point shift)
{
    std::vector<CanonicalCell> long_cells;
    std::vector<std::size_t> long_offsets{0};
    std::vector<CanonicalCell> short_cells;
    std::vector<std::size_t> short_offsets{0};
    long_offsets.reserve(segments.size() + 1);
    short_offsets.reserve(segments.size() + 1);

    std::vector<CanonicalCell> parents;
    for (const Segment& s : segments) {
        const auto cells = registration_cells(s, threshold);
        long_cells.insert(long_cells.end(), cells.begin(), cells.end());
        long_offsets.push_back(long_cells.size());

        // Short registration goes to the parents of the registration cells. They are
        // disjoint cells of one grid, so each path sees the segment at most once.
        parents.clear();
        for (const CanonicalCell& c : cells)
            if (c.depth > 0)
                parents.push_back(c.parent());
        std::sort(parents.begin(), parents.end());
        parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
        short_cells.insert(short_cells.end(), parents.begin(), parents.end());
        short_offsets.push_back(short_cells.size());
    }

    std::vector<CanonicalCell> all_cells;
    all_cells.reserve(base_cells.size() + long_cells.size() + short_cells.size());
    all_cells.insert(all_cells.end(), base_cells.begin(), base_cells.end());
    all_cells.insert(all_cells.end(), long_cells.begin(), long_cells.end());
    all_cells.insert(all_cells.end(), short_cells.begin(), short_cells.end());

    RegistrationResult result;
    result.tree = CompressedQuadtree::build({}, all_cells, shift);
    all_cells = {};
    result.segments.assign(segments.begin(), segments.end());
    result.threshold = threshold;

    auto collect = [&](const std::vector<CanonicalCell>& cells,
                       const std::vector<std::size_t>& offsets) {
        std::vector<std::pair<std::int32_t, std::uint32_t>> entries;
        entries.reserve(cells.size());
        for (std::size_t s = 0; s + 1 < offsets.size(); ++s)
            for (std::size_t k = offsets[s]; k < offsets[s + 1]; ++k)
                entries.emplace_back(*result.tree.find(cells[k]), static_cast<std::uint32_t>(s));
        return NodeLists(result.tree.size(), std::move(entries));
    };
    result.long_lists = collect(long_cells, long_offsets);
    result.short_lists = collect(short_cells, short_offsets);
    return result;
}

} // namespace congestion
