// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "congestion/estimator.hpp"
#include "congestion/long_congestion.hpp"
#include "congestion/oracle.hpp"
#include "congestion/short_congestion.hpp"
#include "instances.hpp"
#include "support.hpp"

using namespace congestion;

namespace {

// Pinned tolerances.
constexpr int kOracleInstances = 50;
constexpr std::size_t kMaxOracleSize = 300;
constexpr double kShortRelativeTolerance = 1e-9;
constexpr int kRegistrationSegments = 10000;
constexpr int kShiftPairs = 10000;
constexpr double kShiftFactor = 6.0;
constexpr int kSandwichTrials = 100;
constexpr double kSandwichDelta = 0.25;
constexpr double kSandwichC = 72.0;
constexpr double kSandwichRatio = 2.0833;
constexpr double kSandwichMaxFailureRate = 0.05;
constexpr double kCountRoundoff = 1e-12;
constexpr int kBracketSeeds = 20;
constexpr double kBracketUpperTolerance = 1e-6;
constexpr double kDenseAnalyticTolerance = 1e-2;
constexpr std::size_t kTimingSizes[] = {50000, 100000, 200000};
constexpr int kTimingRuns = 5;
constexpr double kTimingMaxRatio = 2.6;
constexpr double kTimingBudgetSeconds = 60.0;

class Fingerprint {
public:
    void add(const void* data, std::size_t size)
    {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t k = 0; k < size; ++k) {
            hash_ ^= bytes[k];
            hash_ *= 0x100000001b3ULL;
        }
    }
    void add(double v) { add(&v, sizeof v); }
    void add(std::uint64_t v) { add(&v, sizeof v); }
    template <typename T>
    void add_all(const std::vector<T>& values)
    {
        add(static_cast<std::uint64_t>(values.size()));
        for (const T& v : values)
            add(static_cast<std::conditional_t<std::is_integral_v<T>, std::uint64_t, double>>(v));
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

struct Outcome {
    bool pass = false;
    std::string detail;
    std::uint64_t fingerprint = 0;
};

std::string format(const char* fmt, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

struct OracleInstance {
    std::vector<Segment> shifted;
    int alpha = 8;
    int shift = 0;
};

OracleInstance oracle_instance(int k)
{
    static constexpr int alphas[] = {2, 4, 8};
    OracleInstance inst;
    inst.alpha = alphas[k % 3];
    inst.shift = (k / 3) % kShiftCount;
    const auto seed = static_cast<std::uint64_t>(1000 + k);
    const std::size_t n = 20 + static_cast<std::size_t>(k * 37) % (kMaxOracleSize - 19);
    std::vector<Segment> raw;
    switch (k % 4) {
    case 0:
        raw = testing_support::mixed_instance(n, seed);
        break;
    case 1:
        raw = testing_support::random_segments(n, seed);
        break;
    case 2:
        raw = instances::random_walk(n, seed);
        break;
    default:
        raw = instances::star_through_point(n, seed);
    }
    inst.shifted = testing_support::to_shift_frame(raw, inst.shift);
    return inst;
}

Outcome criterion_short_dp()
{
    Outcome out{true, {}, 0};
    Fingerprint fp;
    double worst = 0.0;
    std::size_t nodes = 0;
    for (int k = 0; k < kOracleInstances; ++k) {
        const auto inst = oracle_instance(k);
        const auto reg = testing_support::augmented_tree(inst.shifted, inst.alpha, inst.shift);
        const auto table = short_congestion_all(reg);
        const auto naive = oracle::naive_quadtree_congestion(reg.tree, inst.shifted,
                                                             LongShortThreshold(inst.alpha));
        for (std::size_t v = 0; v < reg.tree.size(); ++v) {
            const double a = table.congestion[v];
            const double b = naive.short_congestion[v];
            if (!testing_support::relative_close(a, b, kShortRelativeTolerance))
                out.pass = false;
            if (std::max(a, b) > 0.0)
                worst = std::max(worst, std::abs(a - b) / std::max(a, b));
        }
        nodes += reg.tree.size();
        fp.add_all(table.congestion);
    }
    out.detail = format("%d instances, %zu nodes, worst relative gap %.2e (tol %.0e)",
                        kOracleInstances, nodes, worst, kShortRelativeTolerance);
    out.fingerprint = fp.value();
    return out;
}

Outcome criterion_pushdown()
{
    Outcome out{true, {}, 0};
    Fingerprint fp;
    int mismatched = 0;
    std::uint32_t largest = 0;
    for (int k = 0; k < kOracleInstances; ++k) {
        const auto inst = oracle_instance(k);
        const auto reg = testing_support::augmented_tree(inst.shifted, inst.alpha, inst.shift);
        const auto push = pushdown_threshold(reg, {}, kNoThreshold);
        const auto naive = oracle::naive_quadtree_congestion(reg.tree, inst.shifted,
                                                             LongShortThreshold(inst.alpha));
        const auto naive_max =
            oracle::naive_max_conflict(reg.tree, inst.shifted, LongShortThreshold(inst.alpha));
        if (push.exceeded || push.counts != naive.long_count || push.max_count != naive_max)
            ++mismatched;
        largest = std::max(largest, push.max_count);
        fp.add_all(push.counts);
    }
    out.pass = mismatched == 0;
    out.detail = format("%d instances, %d mismatched, largest N = %u", kOracleInstances, mismatched,
                        largest);
    out.fingerprint = fp.value();
    return out;
}

Outcome criterion_registration()
{
    Outcome out{true, {}, 0};
    Fingerprint fp;
    const auto raw = testing_support::random_segments(kRegistrationSegments, 77, 1e-7, 1.0);
    const auto segs = testing_support::to_shift_frame(raw, 1);
    std::string notes;
    for (int alpha : {2, 4, 8}) {
        const LongShortThreshold th(alpha);
        const std::size_t bound = static_cast<std::size_t>(2 * (alpha + 1) + 1);
        std::size_t most = 0;
        int violations = 0;
        for (const Segment& s : segs) {
            const auto cells = registration_cells(s, th);
            most = std::max(most, cells.size());
            CompensatedSum covered;
            for (const auto& c : cells)
                covered.add(half_open_length(s, c.box()));
            if (cells.size() > bound || std::abs(covered.value() - s.length()) > 1e-12 * s.length())
                ++violations;
        }

        // Classification at every node of QT+.
        const auto reg = testing_support::augmented_tree(segs, alpha, 1);
        for (CompressedQuadtree::NodeId v = 0; v < static_cast<CompressedQuadtree::NodeId>(reg.tree.size()); ++v) {
            const CanonicalCell& c = reg.tree.cell(v);
            for (const auto s : reg.long_lists[v]) {
                const double len = segs[s].length();
                const bool maximal = c.depth == 0 || !th.is_long(len, c.parent().radius());
                if (!th.is_long(len, c.radius()) || !maximal ||
                    !intersects_half_open(segs[s], c.box()))
                    ++violations;
            }
            for (const auto s : reg.short_lists[v])
                if (th.is_long(segs[s].length(), c.radius()) ||
                    !intersects_half_open(segs[s], c.box()))
                    ++violations;
        }
        out.pass = out.pass && violations == 0;
        notes += format(" alpha=%d: max %zu cells (bound %zu), %d violations;", alpha, most, bound,
                        violations);
        fp.add(static_cast<std::uint64_t>(most));
        fp.add(static_cast<std::uint64_t>(reg.tree.size()));
        fp.add(static_cast<std::uint64_t>(reg.total_registrations()));
    }
    out.detail = format("%d segments;", kRegistrationSegments) + notes;
    out.fingerprint = fp.value();
    return out;
}

Outcome criterion_shifting()
{
    Outcome out{true, {}, 0};
    Fingerprint fp;
    std::mt19937_64 gen(4242);
    int failures = 0;
    int tested = 0;
    double worst = 0.0;
    while (tested < kShiftPairs) {
        const Point p{testing_support::uniform01(gen), testing_support::uniform01(gen)};
        const double scale = std::ldexp(1.0, -static_cast<int>(gen() % 40));
        const Point q{p.x + scale * (2 * testing_support::uniform01(gen) - 1),
                      p.y + scale * (2 * testing_support::uniform01(gen) - 1)};
        if (!(q.x >= 0 && q.x < 1 && q.y >= 0 && q.y < 1) || p == q)
            continue;
        ++tested;
        const double d = linf_distance(p, q);
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kShiftCount; ++i) {
            const Point v = shift_vector(i);
            best = std::min(best, smallest_containing_cell(p + v, q + v).side());
        }
        worst = std::max(worst, best / d);
        if (best > kShiftFactor * d)
            ++failures;
        fp.add(best);
    }
    out.pass = failures == 0;
    out.detail = format("%d pairs, %d failures, worst side/|p-q| = %.3f (bound %.0f)", tested,
                        failures, worst, kShiftFactor);
    out.fingerprint = fp.value();
    return out;
}

Outcome criterion_sandwich()
{
    Outcome out{true, {}, 0};
    Fingerprint fp;
    std::string notes;
    for (int e = 7; e <= 12; ++e) {
        const std::size_t n = std::size_t{1} << e;
        const auto segs = testing_support::to_shift_frame(
            instances::star_through_point(n, static_cast<std::uint64_t>(e)), 0);
        const auto reg = testing_support::augmented_tree(segs, LongShortThreshold::kDefault);
        const auto exact = pushdown_threshold(reg, {}, kNoThreshold).max_count;
        const double truth = exact;
        int failures = 0;
        int sampled = 0;
        for (int trial = 0; trial < kSandwichTrials; ++trial) {
            SamplingParams params;
            params.delta = kSandwichDelta;
            params.chernoff_c = kSandwichC;
            params.seed = static_cast<std::uint64_t>(trial);
            const auto est = estimate_max_conflict(reg, params);
            sampled += est.exact_first_round ? 0 : 1;
            const double sz = est.max_conflict;
            if (!(sz <= truth && truth <= kSandwichRatio * sz + 1.0))
                ++failures;
            fp.add(sz);
        }
        const double rate = static_cast<double>(failures) / kSandwichTrials;
        out.pass = out.pass && exact == n && rate <= kSandwichMaxFailureRate;
        notes += format(" N=%zu (exact %u, %d sampled): %.0f%%;", n, exact, sampled, 100 * rate);
    }
    out.detail = format("failure rate <= %.0f%% per instance;", 100 * kSandwichMaxFailureRate) + notes;
    out.fingerprint = fp.value();
    return out;
}

Outcome criterion_count_vs_congestion()
{
    Outcome out{true, {}, 0};
    Fingerprint fp;
    int violations = 0;
    double tightest = 0.0;
    const double root8 = std::sqrt(8.0);
    for (int k = 0; k < kOracleInstances; ++k) {
        const auto inst = oracle_instance(k);
        const auto reg = testing_support::augmented_tree(inst.shifted, inst.alpha, inst.shift);
        const auto naive = oracle::naive_quadtree_congestion(reg.tree, inst.shifted,
                                                             LongShortThreshold(inst.alpha));
        for (std::size_t v = 0; v < reg.tree.size(); ++v) {
            const double lhs = naive.long_congestion[v] / root8;
            const double rhs = naive.long_count[v];
            if (lhs > rhs * (1.0 + kCountRoundoff))
                ++violations;
            if (rhs > 0)
                tightest = std::max(tightest, lhs / rhs);
        }
        fp.add_all(naive.long_congestion);
    }
    out.pass = violations == 0;
    out.detail = format("%d instances, %d violations, max longCong/(sqrt8 count) = %.6f",
                        kOracleInstances, violations, tightest);
    out.fingerprint = fp.value();
    return out;
}

Outcome criterion_bracket()
{
    Outcome out{true, {}, 0};
    Fingerprint fp;
    const double expected_factor =
        candidate_factor(kDefaultEps) * kCanonicalFactor *
        (2.0 * (1.0 + 8.0) / 8.0 * std::sqrt(8.0) * 1.25 * 1.25 / 0.75);
    const double factor = approximation_factor(kDefaultEps, LongShortThreshold::kDefault,
                                               SamplingParams::kDefaultDelta);
    if (std::abs(factor - expected_factor) > 1e-9 * expected_factor)
        out.pass = false;

    const double h = 1.0 / std::sqrt(2.0);
    struct Family {
        std::string name;
        std::vector<Segment> segments;
        double congestion;
    };
    std::vector<Family> families{
        {"axis", {{{0, 0}, {1, 0}}}, 2.0},
        {"diagonal", {{{0, 0}, {h, h}}}, 2.0 * std::sqrt(2.0)},
        {"4-star", instances::k_star(4), 8.0},
        {"32-star", instances::k_star(32), 64.0},
        {"zigzag10", instances::zigzag(10, 0.1), 20.0 * std::sqrt(1.01)},
        {"zigzag50", instances::zigzag(50, 0.02), 100.0 * std::sqrt(1.0004)},
    };
    // Congestion is invariant under translation and uniform scaling; these copies sit
    // off the dyadic grid.
    const std::size_t aligned = families.size();
    for (std::size_t k = 0; k < aligned; ++k) {
        Family moved{families[k].name + "'", {}, families[k].congestion};
        for (const Segment& s : families[k].segments)
            moved.segments.push_back(
                {3.7 * s.a + Point{0.3137, -1.234}, 3.7 * s.b + Point{0.3137, -1.234}});
        families.push_back(std::move(moved));
    }
    int failures = 0;
    double worst_ratio = 0.0;
    std::string notes;
    for (const auto& f : families) {
        // The analytic value must agree with the dense-grid witness.
        const double dense = oracle::dense_grid_congestion_lower_bound(f.segments);
        if (dense > f.congestion + 1e-9 || dense < f.congestion * (1.0 - kDenseAnalyticTolerance))
            ++failures;
        double lowest = std::numeric_limits<double>::infinity();
        for (int seed = 0; seed < kBracketSeeds; ++seed) {
            EstimatorParams p;
            p.seed = static_cast<std::uint64_t>(seed);
            const auto r = congestion_estimate(f.segments, p);
            const double c = r.congestion_estimate;
            if (r.approximation_factor != factor || c > f.congestion + kBracketUpperTolerance ||
                f.congestion > factor * c)
                ++failures;
            lowest = std::min(lowest, c);
            worst_ratio = std::max(worst_ratio, f.congestion / c);
            fp.add(c);
        }
        notes += format(" %s: cong %.4f, min estimate %.4f;", f.name.c_str(), f.congestion, lowest);
    }
    out.pass = out.pass && failures == 0;
    out.detail = format("F_default = %.4f, %d failures over %d seeds, worst cong/estimate = %.3f;",
                        factor, failures, kBracketSeeds, worst_ratio) +
                 notes;
    out.fingerprint = fp.value();
    return out;
}

Outcome criterion_runtime()
{
    Outcome out{true, {}, 0};
    std::vector<double> medians;
    bool repeatable = true;
    std::string notes;
    for (const std::size_t n : kTimingSizes) {
        const auto segs = instances::random_walk(n, 2024);
        std::vector<double> seconds;
        std::vector<std::uint64_t> prints;
        for (int run = 0; run < kTimingRuns; ++run) {
            const auto start = std::chrono::steady_clock::now();
            const auto r = congestion_estimate(segs);
            seconds.push_back(
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
            Fingerprint fp;
            fp.add(r.congestion_estimate);
            for (const auto& t : r.per_tree) {
                fp.add(t.tree_estimate);
                fp.add(static_cast<std::uint64_t>(t.node_count));
            }
            prints.push_back(fp.value());
        }
        repeatable = repeatable && std::all_of(prints.begin(), prints.end(),
                                               [&](auto v) { return v == prints.front(); });
        std::sort(seconds.begin(), seconds.end());
        medians.push_back(seconds[seconds.size() / 2]);
        out.fingerprint ^= prints.front() + n;
        notes += format(" n=%zu: %.2fs;", n, medians.back());
    }
    for (std::size_t k = 1; k < medians.size(); ++k) {
        const double ratio = medians[k] / medians[k - 1];
        out.pass = out.pass && ratio <= kTimingMaxRatio;
        notes += format(" ratio %.2f;", ratio);
    }
    out.pass = out.pass && medians.back() < kTimingBudgetSeconds && repeatable;
    out.detail = format("median of %d runs, ratio <= %.1f, budget %.0fs;", kTimingRuns,
                        kTimingMaxRatio, kTimingBudgetSeconds) +
                 notes + (repeatable ? " repeated runs identical" : " repeated runs DIFFER");
    return out;
}

void report(int id, const char* name, const Outcome& o)
{
    std::printf("[%s] criterion %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv)
{
    bool skip_timing = false;
    for (int k = 1; k < argc; ++k)
        if (std::strcmp(argv[k], "--skip-timing") == 0)
            skip_timing = true;

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> deterministic{
        {1, "short-dp-matches-oracle", criterion_short_dp},
        {2, "pushdown-matches-oracle", criterion_pushdown},
        {3, "registration-bounds", criterion_registration},
        {4, "shifting", criterion_shifting},
        {5, "sampling-sandwich", criterion_sandwich},
        {6, "count-vs-congestion", criterion_count_vs_congestion},
        {7, "end-to-end-bracket", criterion_bracket},
    };

    bool all = true;
    std::vector<std::uint64_t> first;
    for (const auto& c : deterministic) {
        const Outcome o = c.run();
        report(c.id, c.name, o);
        all = all && o.pass;
        first.push_back(o.fingerprint);
    }

    Outcome timing{true, "skipped", 0};
    if (!skip_timing) {
        timing = criterion_runtime();
        report(8, "near-linear-runtime", timing);
        all = all && timing.pass;
    } else {
        std::printf("[SKIP] criterion 8 near-linear-runtime: skipped on request\n");
    }

    // Rerun everything with the same seeds and compare fingerprints.
    Outcome determinism{true, {}, 0};
    int differing = 0;
    for (std::size_t k = 0; k < deterministic.size(); ++k)
        if (deterministic[k].run().fingerprint != first[k])
            ++differing;
    determinism.pass = differing == 0 && (skip_timing || timing.detail.find("DIFFER") == std::string::npos);
    determinism.detail = format("criteria 1-7 rerun: %d fingerprint mismatches; criterion 8: %s",
                                differing,
                                skip_timing ? "skipped"
                                            : (timing.detail.find("DIFFER") == std::string::npos
                                                   ? "all timed runs identical"
                                                   : "timed runs differ"));
    report(9, "determinism", determinism);
    all = all && determinism.pass;

    std::printf("%s\n", all ? "ACCEPTANCE: ALL PASS" : "ACCEPTANCE: FAILURES");
    return all ? 0 : 1;
}
