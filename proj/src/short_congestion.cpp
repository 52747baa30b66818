#include "congestion/short_congestion.hpp"

namespace congestion {

ShortCongestionTable short_congestion_all(const RegistrationResult& reg)
{
    using NodeId = CompressedQuadtree::NodeId;
    const auto& tree = reg.tree;
    const auto m = static_cast<NodeId>(tree.size());

    std::vector<CompensatedSum> sums(tree.size());
    for (NodeId v = 0; v < m; ++v) {
        const Box box = tree.cell(v).box();
        for (const std::uint32_t s : reg.short_lists[v])
            sums[static_cast<std::size_t>(v)].add(half_open_length(reg.segments[s], box));
    }

    ShortCongestionTable table;
    table.subtree_length.resize(tree.size());
    table.congestion.resize(tree.size());
    // Pre-order storage: children come after their parent.
    for (NodeId v = m - 1; v >= 0; --v) {
        const auto k = static_cast<std::size_t>(v);
        const double total = sums[k].value();
        table.subtree_length[k] = total;
        table.congestion[k] = total / tree.cell(v).radius();
        if (const NodeId p = tree.parent(v); p != CompressedQuadtree::kNone)
            sums[static_cast<std::size_t>(p)].add(total);
    }
    for (NodeId v = 0; v < m; ++v) {
        if (table.congestion[static_cast<std::size_t>(v)] > table.max_congestion) {
            table.max_congestion = table.congestion[static_cast<std::size_t>(v)];
            table.argmax = v;
        }
    }
    return table;
}

} // namespace congestion
