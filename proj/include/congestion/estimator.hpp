#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "congestion/candidates.hpp"
#include "congestion/long_congestion.hpp"
#include "congestion/quadtree.hpp"
#include "congestion/registration.hpp"

namespace congestion {

// Approximation factors lost by each stage of the pipeline.

/// Candidate squares: cong(S) <= (6 + eps) * cong(G_S).
inline double candidate_factor(double eps) { return 6.0 + eps; }

/// Shifted quadtrees: cong(G_S) <= 6 sqrt(2) * max_i cong(QT_i).
inline const double kCanonicalFactor = 6.0 * std::sqrt(2.0);

/// gamma = (1+alpha)/alpha * sqrt(8) (1+delta)^2 / (1-delta).
double long_side_factor(int alpha, double delta);

/// Per-tree factor 2 * gamma: cong(QT) <= 2 gamma * tree estimate.
inline double tree_factor(int alpha, double delta) { return 2.0 * long_side_factor(alpha, delta); }

/// Limit of the per-tree factor as delta -> 0 and alpha -> infinity.
inline const double kAsymptoticTreeFactor = 4.0 * std::sqrt(2.0);

/// (6 + eps) * 6 sqrt(2) * 2 gamma; the factor that actually holds at these parameters.
double approximation_factor(double eps, int alpha, double delta);

/// 288 + eps: the limit of approximation_factor.
inline double asymptotic_factor(double eps) { return 288.0 + eps; }

struct EstimatorParams {
    double eps = kDefaultEps;
    double delta = SamplingParams::kDefaultDelta;
    int alpha = LongShortThreshold::kDefault;
    /// Defaults to the smallest admissible value for delta.
    std::optional<double> chernoff_c;
    std::uint64_t seed = 0;
    /// Run the three shifted pipelines on separate threads.
    bool parallel = true;

    double resolved_chernoff_c() const;
    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

struct TreeReport {
    double short_congestion = 0.0;
    double max_conflict_estimate = 0.0;
    double long_congestion_estimate = 0.0;
    double tree_estimate = 0.0;
    int rounds = 0;
    bool exact_first_round = false;
    std::size_t node_count = 0;
    std::size_t registrations = 0;

    friend bool operator==(const TreeReport&, const TreeReport&) = default;
};

struct EstimateReport {
    /// Feasible estimate: with high probability cong(S)/factor <= this <= cong(S).
    double congestion_estimate = 0.0;
    /// approximation_factor * congestion_estimate.
    double implied_upper_bound = 0.0;
    double approximation_factor = 0.0;
    double asymptotic_factor = 0.0;
    std::array<TreeReport, kShiftCount> per_tree{};

    double eps = kDefaultEps;
    double delta = SamplingParams::kDefaultDelta;
    int alpha = LongShortThreshold::kDefault;
    double chernoff_c = 0.0;
    std::uint64_t seed = 0;

    std::size_t segment_count = 0;
    std::size_t dropped_segments = 0;
    std::size_t candidate_squares = 0;

    /// Wall time per stage in milliseconds (stages summed over trees).
    std::map<std::string, double> timings_ms;
};

/// Removes zero-length segments; returns how many were dropped.
std::size_t drop_degenerate(std::vector<Segment>& segments);

/// max(exact short congestion, long-congestion estimate) for one augmented tree.
double quadtree_congestion_estimate(const RegistrationResult& reg, const SamplingParams& params,
                                    TreeReport* detail = nullptr);

/// Runs the full pipeline on S. Zero-length segments are dropped first; an empty
/// input yields an all-zero report.
EstimateReport congestion_estimate(std::span<const Segment> segments,
                                   const EstimatorParams& params = {});

} // namespace congestion
