#pragma once

#include <span>
#include <vector>

#include "congestion/geometry.hpp"

namespace congestion {

inline constexpr double kDefaultEps = 0.1;

/// Squares whose largest congestion is within a constant factor of cong(S).
struct CandidateSquareSet {
    std::vector<Square> squares;
    double eps = kDefaultEps;

    /// Maximum square_congestion over the set (0 when empty).
    double max_congestion(std::span<const Segment> segments) const;
};

class CandidateGenerator {
public:
    virtual ~CandidateGenerator() = default;
    virtual CandidateSquareSet generate(std::span<const Segment> segments, double eps) const = 0;
};

/// Squares from a well-separated pair decomposition of the segment endpoints.
///
/// The decomposition runs on a compressed quadtree of the normalized endpoints
/// with separation ratio `separation_per_eps / eps`. Each pair (A, B) with
/// representatives a, b yields the square centered at the midpoint of ab with
/// radius |a - b|_inf * (1/2 + eps). In addition every distinct endpoint gets a
/// square of radius equal to its shortest incident segment.
class WspdCandidateGenerator final : public CandidateGenerator {
public:
    static constexpr double kDefaultSeparationPerEps = 0.5;

    explicit WspdCandidateGenerator(double separation_per_eps = kDefaultSeparationPerEps);

    CandidateSquareSet generate(std::span<const Segment> segments, double eps) const override;

    double separation(double eps) const { return separation_per_eps_ / eps; }

private:
    double separation_per_eps_;
};

/// Generates candidates with the default WSPD generator. Throws
/// std::invalid_argument unless eps is in (0,1).
CandidateSquareSet generate_candidate_squares(std::span<const Segment> segments,
                                              double eps = kDefaultEps);

} // namespace congestion
