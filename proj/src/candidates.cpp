#include "congestion/candidates.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

#include "congestion/quadtree.hpp"

namespace congestion {

namespace {

using NodeId = CompressedQuadtree::NodeId;

struct NodeExtent {
    Box box{};
    Point representative;
    bool filled = false;

    double half_diagonal() const
    {
        return 0.5 * std::hypot(box.xmax - box.xmin, box.ymax - box.ymin);
    }
    Point center() const { return {0.5 * (box.xmin + box.xmax), 0.5 * (box.ymin + box.ymax)}; }
};

class PairDecomposition {
public:
    PairDecomposition(const CompressedQuadtree& tree, std::vector<NodeExtent> extents,
                      double separation, double eps, std::vector<Square>& out)
        : tree_(tree), extents_(std::move(extents)), separation_(separation), eps_(eps), out_(out)
    {
    }

    void pairs_within(NodeId u)
    {
        const auto kids = tree_.children(u);
        for (std::size_t a = 0; a < kids.size(); ++a)
            for (std::size_t b = a + 1; b < kids.size(); ++b)
                separate(kids[a], kids[b]);
        for (const NodeId c : kids)
            pairs_within(c);
    }

private:
    const NodeExtent& extent(NodeId v) const { return extents_[static_cast<std::size_t>(v)]; }

    bool well_separated(NodeId u, NodeId v) const
    {
        const double rho = std::max(extent(u).half_diagonal(), extent(v).half_diagonal());
        return distance(extent(u).center(), extent(v).center()) - 2.0 * rho >= separation_ * rho;
    }

    void emit(NodeId u, NodeId v)
    {
        const Point a = extent(u).representative;
        const Point b = extent(v).representative;
        out_.push_back({0.5 * (a + b), linf_distance(a, b) * (0.5 + eps_)});
    }

    void separate(NodeId u, NodeId v)
    {
        if (well_separated(u, v)) {
            emit(u, v);
            return;
        }
        if (extent(u).half_diagonal() < extent(v).half_diagonal())
            std::swap(u, v);
        if (tree_.is_leaf(u))
            std::swap(u, v);
        if (tree_.is_leaf(u)) {
            // Two leaves closer than the cell resolution: nothing left to split.
            emit(u, v);
            return;
        }
        for (const NodeId c : tree_.children(u))
            separate(c, v);
    }

    const CompressedQuadtree& tree_;
    std::vector<NodeExtent> extents_;
    double separation_;
    double eps_;
    std::vector<Square>& out_;
};

void check_eps(double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("eps must lie in (0,1), got " + std::to_string(eps));
}

} // namespace

double CandidateSquareSet::max_congestion(std::span<const Segment> segments) const
{
    double best = 0.0;
    for (const Square& q : squares)
        best = std::max(best, square_congestion(segments, q));
    return best;
}

WspdCandidateGenerator::WspdCandidateGenerator(double separation_per_eps)
    : separation_per_eps_(separation_per_eps)
{
    if (!(separation_per_eps > 0.0))
        throw std::invalid_argument("WSPD separation must be positive");
}

CandidateSquareSet WspdCandidateGenerator::generate(std::span<const Segment> segments,
                                                    double eps) const
{
    check_eps(eps);
    CandidateSquareSet result;
    result.eps = eps;
    if (segments.empty())
        return result;

    const Normalization norm = fit_normalization(segments);

    // Distinct endpoints with their shortest incident segment.
    std::vector<std::pair<Point, double>> endpoints;
    endpoints.reserve(2 * segments.size());
    for (const Segment& s : segments) {
        const Segment n = norm.apply(s);
        const double len = n.length();
        endpoints.emplace_back(n.a, len);
        endpoints.emplace_back(n.b, len);
    }
    std::sort(endpoints.begin(), endpoints.end(), [](const auto& l, const auto& r) {
        return std::tie(l.first.x, l.first.y, l.second) < std::tie(r.first.x, r.first.y, r.second);
    });
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end(),
                                [](const auto& l, const auto& r) { return l.first == r.first; }),
                    endpoints.end());

    std::vector<Square> squares;
    for (const auto& [p, shortest] : endpoints)
        if (shortest > 0.0)
            squares.push_back({p, shortest});

    std::vector<Point> points;
    points.reserve(endpoints.size());
    for (const auto& e : endpoints)
        points.push_back(e.first);
    const CompressedQuadtree tree = CompressedQuadtree::build(points, {});

    std::vector<NodeExtent> extents(tree.size());
    for (const Point& p : points) {
        NodeExtent& leaf = extents[static_cast<std::size_t>(*tree.find(cell_of_point(p)))];
        if (!leaf.filled) {
            leaf.box = {p.x, p.y, p.x, p.y};
            leaf.representative = p;
            leaf.filled = true;
        } else {
            leaf.box = {std::min(leaf.box.xmin, p.x), std::min(leaf.box.ymin, p.y),
                        std::max(leaf.box.xmax, p.x), std::max(leaf.box.ymax, p.y)};
        }
    }
    for (auto v = static_cast<NodeId>(tree.size()) - 1; v > 0; --v) {
        const NodeExtent& child = extents[static_cast<std::size_t>(v)];
        NodeExtent& parent = extents[static_cast<std::size_t>(tree.parent(v))];
        if (!child.filled)
            continue;
        if (!parent.filled) {
            parent = child;
        } else {
            parent.box = {std::min(parent.box.xmin, child.box.xmin),
                          std::min(parent.box.ymin, child.box.ymin),
                          std::max(parent.box.xmax, child.box.xmax),
                          std::max(parent.box.ymax, child.box.ymax)};
        }
    }

    PairDecomposition wspd(tree, std::move(extents), separation(eps), eps, squares);
    wspd.pairs_within(tree.root());

    result.squares.reserve(squares.size());
    for (const Square& q : squares)
        result.squares.push_back(norm.invert(q));
    return result;
}

CandidateSquareSet generate_candidate_squares(std::span<const Segment> segments, double eps)
{
    return WspdCandidateGenerator().generate(segments, eps);
}

} // namespace congestion
