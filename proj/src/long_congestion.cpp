#include "congestion/long_congestion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace congestion {

void SamplingParams::validate() const
{
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1), got " + std::to_string(delta));
    const double minimum = min_chernoff_constant(delta);
    if (!(chernoff_c >= minimum))
        throw std::invalid_argument("Chernoff constant C=" + std::to_string(chernoff_c) +
                                    " is below the minimum " + std::to_string(minimum) +
                                    " for delta=" + std::to_string(delta));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PushdownResult pushdown_threshold(const RegistrationResult& reg,
                                  std::span<const std::uint8_t> in_sample, double threshold)
{
    using NodeId = CompressedQuadtree::NodeId;
    const auto& tree = reg.tree;
    const auto m = static_cast<NodeId>(tree.size());
    const bool everyone = in_sample.empty();

    PushdownResult result;
    result.counts.assign(tree.size(), 0);

    // lists[k] is the conflict list of path[k]; path is the current root path.
    std::vector<std::vector<std::uint32_t>> lists;
    std::vector<NodeId> path;
    for (NodeId v = 0; v < m; ++v) {
        const NodeId parent = tree.parent(v);
        while (!path.empty() && path.back() != parent)
            path.pop_back();
        const std::size_t k = path.size();
        if (lists.size() <= k)
            lists.resize(k + 1);

        auto& current = lists[k];
        current.clear();
        if (k > 0) {
            const Box box = tree.cell(v).box();
            for (const std::uint32_t s : lists[k - 1])
                if (intersects_half_open(reg.segments[s], box))
                    current.push_back(s);
        }
        for (const std::uint32_t s : reg.long_lists[v])
            if (everyone || in_sample[s])
                current.push_back(s);

        if (static_cast<double>(current.size()) > threshold) {
            result.exceeded = true;
            result.exceeded_at = v;
            result.counts.clear();
            result.max_count = 0;
            return result;
        }
        const auto count = static_cast<std::uint32_t>(current.size());
        result.counts[static_cast<std::size_t>(v)] = count;
        result.max_count = std::max(result.max_count, count);
        path.push_back(v);
    }
    return result;
}

LongEstimate estimate_max_conflict(const RegistrationResult& reg, SamplingParams params)
{
    params.validate();
    const std::size_t m = params.cells != 0 ? params.cells : reg.tree.size();
    // Clamp m so the first guess is positive even for a one-node tree.
    const double base = params.chernoff_c * std::log(static_cast<double>(std::max<std::size_t>(m, 2)));

    LongEstimate est;
    double t = base;
    PushdownResult pass = pushdown_threshold(reg, {}, t);
    est.rounds = 1;
    est.trace.push_back({0, t, 1.0, pass.exceeded ? RoundOutcome::fail : RoundOutcome::pass});
    if (!pass.exceeded) {
        est.max_conflict = pass.max_count;
        est.exact_first_round = true;
        return est;
    }

    std::vector<std::uint8_t> sample(reg.segments.size());
    for (int round = 1;; ++round) {
        t = std::ceil((1.0 + params.delta) * t);
        const double p = std::min(1.0, base / t);
        std::mt19937_64 gen(derive_seed(params.seed, static_cast<std::uint64_t>(round)));
        for (auto& bit : sample)
            bit = static_cast<double>(gen() >> 11) * 0x1.0p-53 < p;

        pass = pushdown_threshold(reg, sample, (1.0 + params.delta) * t * p);
        ++est.rounds;
        est.trace.push_back({round, t, p, pass.exceeded ? RoundOutcome::fail : RoundOutcome::pass});
        if (!pass.exceeded) {
            est.max_conflict = p == 1.0 ? pass.max_count : t / (1.0 + params.delta);
            return est;
        }
    }
}

double long_congestion_estimate(const LongEstimate& est, LongShortThreshold threshold)
{
    const double alpha = threshold.alpha();
    return est.max_conflict * alpha / (1.0 + alpha);
}

} // namespace congestion
