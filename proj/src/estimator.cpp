#include "congestion/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>

#include "congestion/short_congestion.hpp"

namespace congestion {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

struct StageTimes {
    double build_ms = 0.0;
    double short_ms = 0.0;
    double long_ms = 0.0;
};

double estimate_tree(const RegistrationResult& reg, const SamplingParams& params,
                     TreeReport& detail, StageTimes& times)
{
    auto start = Clock::now();
    const ShortCongestionTable shorts = short_congestion_all(reg);
    times.short_ms += elapsed_ms(start);

    start = Clock::now();
    const LongEstimate longs = estimate_max_conflict(reg, params);
    times.long_ms += elapsed_ms(start);

    detail.short_congestion = shorts.max_congestion;
    detail.max_conflict_estimate = longs.max_conflict;
    detail.long_congestion_estimate = long_congestion_estimate(longs, reg.threshold);
    detail.tree_estimate = std::max(detail.short_congestion, detail.long_congestion_estimate);
    detail.rounds = longs.rounds;
    detail.exact_first_round = longs.exact_first_round;
    detail.node_count = reg.tree.size();
    detail.registrations = reg.total_registrations();
    return detail.tree_estimate;
}

struct TreeJob {
    TreeReport report;
    StageTimes times;
};

TreeJob run_shift(int shift_index, std::span<const Segment> normalized,
                  std::span<const Square> candidates, const EstimatorParams& params)
{
    TreeJob job;
    const auto start = Clock::now();
    const Point shift = shift_vector(shift_index);

    std::vector<CanonicalCell> base;
    base.reserve(2 * normalized.size() + candidates.size());
    std::vector<Segment> shifted;
    shifted.reserve(normalized.size());
    for (const Segment& s : normalized) {
        const Segment moved{s.a + shift, s.b + shift};
        shifted.push_back(moved);
        base.push_back(cell_of_point(moved.a));
        base.push_back(cell_of_point(moved.b));
    }
    // Neighbouring candidates often share a cover; the tree build removes the rest.
    for (const Square& q : candidates) {
        const CanonicalCell c = canonical_cover(q, shift);
        if (base.empty() || !(base.back() == c))
            base.push_back(c);
    }

    const RegistrationResult reg =
        build_augmented_quadtree(base, shifted, LongShortThreshold(params.alpha), shift);
    base = {};
    job.times.build_ms = elapsed_ms(start);

    SamplingParams sampling;
    sampling.delta = params.delta;
    sampling.chernoff_c = params.resolved_chernoff_c();
    sampling.cells = reg.tree.size();
    sampling.seed = derive_seed(params.seed, static_cast<std::uint64_t>(shift_index));
    estimate_tree(reg, sampling, job.report, job.times);
    return job;
}

} // namespace

double long_side_factor(int alpha, double delta)
{
    const double a = alpha;
    return (1.0 + a) / a * std::sqrt(8.0) * (1.0 + delta) * (1.0 + delta) / (1.0 - delta);
}

double approximation_factor(double eps, int alpha, double delta)
{
    return candidate_factor(eps) * kCanonicalFactor * tree_factor(alpha, delta);
}

double EstimatorParams::resolved_chernoff_c() const
{
    return chernoff_c.value_or(SamplingParams::min_chernoff_constant(delta));
}

void EstimatorParams::validate() const
{
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("eps must lie in (0,1), got " + std::to_string(eps));
    (void)LongShortThreshold(alpha);
    SamplingParams sampling;
    sampling.delta = delta;
    sampling.chernoff_c = resolved_chernoff_c();
    sampling.validate();
}

std::size_t drop_degenerate(std::vector<Segment>& segments)
{
    const auto before = segments.size();
    std::erase_if(segments, [](const Segment& s) { return !(s.length() > 0.0); });
    return before - segments.size();
}

double quadtree_congestion_estimate(const RegistrationResult& reg, const SamplingParams& params,
                                    TreeReport* detail)
{
    TreeReport local;
    StageTimes times;
    return estimate_tree(reg, params, detail != nullptr ? *detail : local, times);
}

EstimateReport congestion_estimate(std::span<const Segment> segments, const EstimatorParams& params)
{
    params.validate();
    const auto start = Clock::now();

    EstimateReport report;
    report.eps = params.eps;
    report.delta = params.delta;
    report.alpha = params.alpha;
    report.chernoff_c = params.resolved_chernoff_c();
    report.seed = params.seed;
    report.approximation_factor = approximation_factor(params.eps, params.alpha, params.delta);
    report.asymptotic_factor = asymptotic_factor(params.eps);

    std::vector<Segment> input(segments.begin(), segments.end());
    for (const Segment& s : input)
        if (!s.a.finite() || !s.b.finite())
            throw std::invalid_argument("segment coordinates must be finite");
    report.dropped_segments = drop_degenerate(input);
    report.segment_count = input.size();
    if (input.empty()) {
        report.timings_ms["total"] = elapsed_ms(start);
        return report;
    }

    auto stage = Clock::now();
    const Normalization norm = fit_normalization(input);
    std::vector<Segment> normalized;
    normalized.reserve(input.size());
    for (const Segment& s : input)
        normalized.push_back(norm.apply(s));
    input = {};
    // Normalization can collapse segments far below the working resolution.
    report.dropped_segments += drop_degenerate(normalized);
    report.segment_count = normalized.size();
    report.timings_ms["normalize"] = elapsed_ms(stage);

    stage = Clock::now();
    const CandidateSquareSet candidates = generate_candidate_squares(normalized, params.eps);
    report.candidate_squares = candidates.squares.size();
    report.timings_ms["candidate_squares"] = elapsed_ms(stage);

    std::array<TreeJob, kShiftCount> jobs;
    if (params.parallel && std::thread::hardware_concurrency() > 1) {
        std::array<std::future<TreeJob>, kShiftCount> futures;
        for (int i = 0; i < kShiftCount; ++i)
            futures[static_cast<std::size_t>(i)] =
                std::async(std::launch::async, run_shift, i, std::span<const Segment>(normalized),
                           std::span<const Square>(candidates.squares), std::cref(params));
        for (int i = 0; i < kShiftCount; ++i)
            jobs[static_cast<std::size_t>(i)] = futures[static_cast<std::size_t>(i)].get();
    } else {
        for (int i = 0; i < kShiftCount; ++i)
            jobs[static_cast<std::size_t>(i)] = run_shift(i, normalized, candidates.squares, params);
    }

    StageTimes times;
    for (int i = 0; i < kShiftCount; ++i) {
        const TreeJob& job = jobs[static_cast<std::size_t>(i)];
        report.per_tree[static_cast<std::size_t>(i)] = job.report;
        report.congestion_estimate = std::max(report.congestion_estimate, job.report.tree_estimate);
        times.build_ms += job.times.build_ms;
        times.short_ms += job.times.short_ms;
        times.long_ms += job.times.long_ms;
    }
    report.implied_upper_bound = report.approximation_factor * report.congestion_estimate;
    report.timings_ms["quadtrees_and_registration"] = times.build_ms;
    report.timings_ms["short_congestion"] = times.short_ms;
    report.timings_ms["long_congestion"] = times.long_ms;
    report.timings_ms["total"] = elapsed_ms(start);
    return report;
}

} // namespace congestion
