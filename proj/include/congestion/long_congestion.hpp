#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "congestion/registration.hpp"

namespace congestion {

/// Parameters of the sampling verifier. Logarithms are natural; the base only
/// rescales the Chernoff constant C.
struct SamplingParams {
    static constexpr double kDefaultDelta = 0.25;

    double delta = kDefaultDelta;
    double chernoff_c = min_chernoff_constant(kDefaultDelta);
    /// Number of cells of QT+. Zero means "take it from the tree".
    std::size_t cells = 0;
    std::uint64_t seed = 0;

    /// Smallest admissible C: max(2(2+d)/d^2, 2(1-d)/((1+d) d^2)).
    static constexpr double min_chernoff_constant(double delta)
    {
        const double d2 = delta * delta;
        const double upper_tail = 2.0 * (2.0 + delta) / d2;
        const double lower_tail = 2.0 * (1.0 - delta) / ((1.0 + delta) * d2);
        return upper_tail > lower_tail ? upper_tail : lower_tail;
    }

    /// Throws std::invalid_argument when delta or C is out of range.
    void validate() const;
};

enum class RoundOutcome { pass, fail };

struct SamplingState {
    int round = 0;
    /// Current guess for the maximum conflict-list size.
    double t = 0.0;
    /// Inclusion probability C log m / t, clamped to 1.
    double p = 1.0;
    RoundOutcome outcome = RoundOutcome::fail;

    friend bool operator==(const SamplingState&, const SamplingState&) = default;
};

struct LongEstimate {
    /// Estimate of N, the largest number of long segments meeting one cell.
    double max_conflict = 0.0;
    int rounds = 0;
    bool exact_first_round = false;
    std::vector<SamplingState> trace;

    friend bool operator==(const LongEstimate&, const LongEstimate&) = default;
};

struct PushdownResult {
    bool exceeded = false;
    /// Node where the threshold was first exceeded, if it was.
    CompressedQuadtree::NodeId exceeded_at = CompressedQuadtree::kNone;
    /// Per-node number of long (sampled) segments meeting the cell; filled only
    /// when the pass completes.
    std::vector<std::uint32_t> counts;
    std::uint32_t max_count = 0;
};

inline constexpr double kNoThreshold = std::numeric_limits<double>::infinity();

/// Pushes the long lists top-down, filtering by cell intersection, and bails out
/// as soon as a list grows beyond `threshold`. `in_sample` selects the segments
/// taking part (empty span: all of them).
PushdownResult pushdown_threshold(const RegistrationResult& reg,
                                  std::span<const std::uint8_t> in_sample, double threshold);

/// Exponential search with sampled verification for the maximum long count.
/// With high probability est <= N <= (1+delta)^2/(1-delta) * est.
LongEstimate estimate_max_conflict(const RegistrationResult& reg, SamplingParams params);

/// est * alpha / (1 + alpha); a lower bound on the congestion of the input.
double long_congestion_estimate(const LongEstimate& est, LongShortThreshold threshold);

/// Seed for an independent substream (SplitMix64 finalizer over seed and index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace congestion
