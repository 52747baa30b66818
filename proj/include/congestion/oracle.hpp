#pragma once

// Brute-force reference implementations. Quadratic; meant for tests and for the
// CLI's --mode oracle on small inputs.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "congestion/candidates.hpp"
#include "congestion/geometry.hpp"
#include "congestion/quadtree.hpp"
#include "congestion/registration.hpp"

namespace congestion::oracle {

inline constexpr std::size_t kDefaultCap = 2000;

struct CapExceeded : std::length_error {
    using std::length_error::length_error;
};

/// Per-node values computed from full conflict lists.
struct NodeCongestion {
    std::vector<double> total;            ///< |S clipped to cell| / r
    std::vector<double> short_congestion; ///< same, restricted to alpha-short segments
    std::vector<double> long_congestion;  ///< same, restricted to alpha-long segments
    std::vector<std::uint32_t> long_count;
    double max_total = 0.0;
};

/// Conflict list of every node, found by sending each parent's list to its
/// children and filtering by half-open cell intersection.
std::vector<std::vector<std::uint32_t>> conflict_lists(const CompressedQuadtree& tree,
                                                       std::span<const Segment> segments,
                                                       std::size_t cap = kDefaultCap);

NodeCongestion naive_quadtree_congestion(const CompressedQuadtree& tree,
                                         std::span<const Segment> segments,
                                         LongShortThreshold threshold = {},
                                         std::size_t cap = kDefaultCap);

/// Largest number of alpha-long segments meeting a single node cell.
std::uint32_t naive_max_conflict(const CompressedQuadtree& tree, std::span<const Segment> segments,
                                 LongShortThreshold threshold = {}, std::size_t cap = kDefaultCap);

struct OracleBracket {
    /// Congestion of a concrete witness square, so always <= cong(S).
    double lower = 0.0;
    std::optional<double> upper;
};

struct DenseGridOptions {
    static constexpr int kDefaultResolution = 256;
    static constexpr int kDefaultRadiusLevels = 12;

    int resolution = kDefaultResolution;
    int radius_levels = kDefaultRadiusLevels;
};

/// Squares centered on a (resolution+1)^2 lattice spanning the bounding box of S,
/// with radii E/2, E/4, ... (radius_levels of them), E the larger box extent.
/// Refining the resolution by an integer factor never removes a square.
class DenseGridCandidateGenerator final : public CandidateGenerator {
public:
    explicit DenseGridCandidateGenerator(DenseGridOptions options = {}) : options_(options) {}
    CandidateSquareSet generate(std::span<const Segment> segments, double eps) const override;

private:
    DenseGridOptions options_;
};

/// Maximum congestion over the dense-grid squares; a lower bound on cong(S).
double dense_grid_congestion_lower_bound(std::span<const Segment> segments,
                                         DenseGridOptions options = {});

OracleBracket dense_grid_bracket(std::span<const Segment> segments, DenseGridOptions options = {},
                                 std::optional<double> analytic_upper = std::nullopt);

} // namespace congestion::oracle
