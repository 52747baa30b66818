#pragma once

#include <vector>

#include "congestion/registration.hpp"

namespace congestion {

struct ShortCongestionTable {
    /// Clipped length of all short segments inside each node's cell.
    std::vector<double> subtree_length;
    /// subtree_length / radius per node.
    std::vector<double> congestion;
    double max_congestion = 0.0;
    CompressedQuadtree::NodeId argmax = 0;
};

/// Bottom-up pass: every node adds the clipped length of its own short list to
/// the totals of its children.
ShortCongestionTable short_congestion_all(const RegistrationResult& reg);

} // namespace congestion
