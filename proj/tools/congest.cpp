#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "congestion/estimator.hpp"
#include "input.hpp"
#include "instances.hpp"

#ifdef CONGESTION_WITH_ORACLE
#include "congestion/oracle.hpp"
#endif

namespace {

using congestion::Segment;
using nlohmann::json;

enum class Mode { estimate, oracle, bench, gen };

struct RunConfig {
    std::string input_path;
    bool polyline = false;
    congestion::EstimatorParams params;
    double chernoff_c = 0.0;
    Mode mode = Mode::estimate;
    std::string output_path;
    std::size_t oracle_cap = 2000;
    int oracle_resolution = 256;

    std::vector<std::size_t> bench_sizes{10000, 20000, 40000, 80000};
    int bench_repeats = 3;

    std::string family = "random-walk";
    std::size_t count = 1000;
    double zigzag_h = 0.01;
};

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

congestion::io::ParsedInput read_input(const RunConfig& cfg)
{
    const auto mode =
        cfg.polyline ? congestion::io::InputMode::polyline : congestion::io::InputMode::segments;
    if (cfg.input_path == "-")
        return congestion::io::parse_input(std::cin, mode);
    return congestion::io::parse_input(std::filesystem::path(cfg.input_path), mode);
}

json tree_json(const congestion::TreeReport& t)
{
    return {{"short_congestion", t.short_congestion},
            {"max_conflict_estimate", t.max_conflict_estimate},
            {"long_congestion_estimate", t.long_congestion_estimate},
            {"tree_estimate", t.tree_estimate},
            {"rounds", t.rounds},
            {"exact_first_round", t.exact_first_round},
            {"nodes", t.node_count},
            {"registrations", t.registrations}};
}

json report_json(const congestion::EstimateReport& r, const std::vector<std::string>& warnings)
{
    json trees = json::array();
    for (const auto& t : r.per_tree)
        trees.push_back(tree_json(t));
    json stages = json::object();
    for (const auto& [name, ms] : r.timings_ms)
        if (name != "total")
            stages[name] = ms;
    const auto total = r.timings_ms.find("total");
    return {{"congestion_estimate", r.congestion_estimate},
            {"implied_upper_bound", r.implied_upper_bound},
            {"approximation_factor", r.approximation_factor},
            {"asymptotic_factor", r.asymptotic_factor},
            {"per_tree", trees},
            {"params",
             {{"eps", r.eps}, {"delta", r.delta}, {"alpha", r.alpha}, {"C", r.chernoff_c},
              {"seed", r.seed}}},
            {"segments", r.segment_count},
            {"dropped_segments", r.dropped_segments},
            {"candidate_squares", r.candidate_squares},
            {"warnings", warnings},
            {"timings_ms",
             {{"total", total == r.timings_ms.end() ? 0.0 : total->second}, {"per_stage", stages}}}};
}

void emit(const RunConfig& cfg, const json& doc, const std::string& summary)
{
    const std::string text = doc.dump(2) + "\n";
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        std::cout << text;
        std::cerr << summary;
    } else {
        write_output(cfg.output_path, text);
        std::cout << summary;
    }
}

int run_estimate(const RunConfig& cfg)
{
    auto input = read_input(cfg);
    const auto report = congestion::congestion_estimate(input.segments, cfg.params);
    std::ostringstream summary;
    summary << "segments: " << report.segment_count << " (dropped " << input.dropped_zero_length
            << ")\n"
            << "congestion estimate: " << report.congestion_estimate << "\n"
            << "implied upper bound: " << report.implied_upper_bound << " (factor "
            << report.approximation_factor << ")\n"
            << "time: " << report.timings_ms.at("total") << " ms\n";
    emit(cfg, report_json(report, input.warnings), summary.str());
    return 0;
}

#ifdef CONGESTION_WITH_ORACLE
int run_oracle(const RunConfig& cfg)
{
    auto input = read_input(cfg);
    if (input.segments.size() > cfg.oracle_cap) {
        std::cerr << "error: oracle refuses " << input.segments.size() << " segments (cap "
                  << cfg.oracle_cap << ")\n";
        return 3;
    }
    congestion::oracle::DenseGridOptions grid;
    grid.resolution = cfg.oracle_resolution;
    const double dense = congestion::oracle::dense_grid_congestion_lower_bound(input.segments, grid);

    // Exact congestion of the canonical cells of the three shifted quadtrees.
    double canonical = 0.0;
    if (!input.segments.empty()) {
        const auto norm = congestion::fit_normalization(input.segments);
        std::vector<Segment> normalized;
        for (const Segment& s : input.segments)
            normalized.push_back(norm.apply(s));
        congestion::drop_degenerate(normalized);
        for (int i = 0; i < congestion::kShiftCount; ++i) {
            const auto shift = congestion::shift_vector(i);
            std::vector<congestion::Point> points;
            std::vector<Segment> shifted;
            for (const Segment& s : normalized) {
                shifted.push_back({s.a + shift, s.b + shift});
                points.push_back(s.a + shift);
                points.push_back(s.b + shift);
            }
            const auto tree = congestion::CompressedQuadtree::build(points, {}, shift);
            const auto nc = congestion::oracle::naive_quadtree_congestion(
                tree, shifted, congestion::LongShortThreshold(cfg.params.alpha), cfg.oracle_cap);
            canonical = std::max(canonical, nc.max_total);
        }
    }
    const double lower = std::max(dense, canonical);
    json doc = {{"dense_grid_lower_bound", dense},
                {"canonical_cell_max", canonical},
                {"lower_bound", lower},
                {"grid_resolution", grid.resolution},
                {"radius_levels", grid.radius_levels},
                {"segments", input.segments.size()},
                {"warnings", input.warnings}};
    std::ostringstream summary;
    summary << "oracle lower bound on congestion: " << lower << "\n";
    emit(cfg, doc, summary.str());
    return 0;
}
#endif

int run_bench(const RunConfig& cfg)
{
    using Clock = std::chrono::steady_clock;
    std::ostringstream csv;
    csv << "n,median_ms,min_ms,max_ms,congestion_estimate\n";
    for (const std::size_t n : cfg.bench_sizes) {
        const auto segments = congestion::instances::random_walk(n, cfg.params.seed);
        std::vector<double> times;
        double estimate = 0.0;
        for (int r = 0; r < cfg.bench_repeats; ++r) {
            const auto start = Clock::now();
            estimate = congestion::congestion_estimate(segments, cfg.params).congestion_estimate;
            times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
        }
        std::sort(times.begin(), times.end());
        csv << n << ',' << times[times.size() / 2] << ',' << times.front() << ',' << times.back()
            << ',' << estimate << '\n';
        std::cerr << "n=" << n << " median " << times[times.size() / 2] << " ms\n";
    }
    write_output(cfg.output_path, csv.str());
    return 0;
}

int run_gen(const RunConfig& cfg)
{
    namespace gen = congestion::instances;
    std::vector<Segment> segments;
    const auto seed = cfg.params.seed;
    if (cfg.family == "random-walk")
        segments = gen::random_walk(cfg.count, seed);
    else if (cfg.family == "zigzag")
        segments = gen::zigzag(cfg.count, cfg.zigzag_h);
    else if (cfg.family == "k-star")
        segments = gen::k_star(cfg.count);
    else if (cfg.family == "uniform")
        segments = gen::uniform_random_segments(cfg.count, seed);
    else if (cfg.family == "star")
        segments = gen::star_through_point(cfg.count, seed);
    std::ostringstream out;
    out.precision(17);
    out << "# " << cfg.family << " n=" << cfg.count << " seed=" << seed << '\n';
    for (const Segment& s : segments)
        out << s.a.x << ' ' << s.a.y << ' ' << s.b.x << ' ' << s.b.y << '\n';
    write_output(cfg.output_path, out.str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    CLI::App app{"Approximate the congestion of a set of planar segments."};
    app.add_option("--input,-i", cfg.input_path, "Segment file, or - for stdin");
    app.add_flag("--polyline", cfg.polyline, "Input holds one vertex per line");
    app.add_option("--eps", cfg.params.eps, "Candidate-square slack, in (0,1)")
        ->capture_default_str();
    app.add_option("--delta", cfg.params.delta, "Sampling accuracy, in (0,1)")
        ->capture_default_str();
    app.add_option("--alpha", cfg.params.alpha, "Long/short threshold, integer >= 1")
        ->capture_default_str();
    app.add_option("--seed", cfg.params.seed, "64-bit seed")->capture_default_str();
    app.add_option("--chernoff-c", cfg.chernoff_c,
                   "Sampling constant C (default: smallest admissible for delta)");
    app.add_flag("!--serial", cfg.params.parallel, "Run the three shifted trees sequentially");
    const std::map<std::string, Mode> modes{
        {"estimate", Mode::estimate}, {"oracle", Mode::oracle}, {"bench", Mode::bench},
        {"gen", Mode::gen}};
    app.add_option("--mode", cfg.mode, "estimate | oracle | bench | gen")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    app.add_option("--out,-o", cfg.output_path, "Output path (default stdout)");
    app.add_option("--oracle-cap", cfg.oracle_cap, "Largest input the oracle accepts")
        ->capture_default_str();
    app.add_option("--oracle-resolution", cfg.oracle_resolution, "Dense grid resolution")
        ->capture_default_str();
    app.add_option("--sizes", cfg.bench_sizes, "Bench: instance sizes");
    app.add_option("--repeats", cfg.bench_repeats, "Bench: runs per size")->capture_default_str();
    app.add_option("--family", cfg.family, "Gen: random-walk | zigzag | k-star | uniform | star")
        ->check(CLI::IsMember({"random-walk", "zigzag", "k-star", "uniform", "star"}));
    app.add_option("-n", cfg.count, "Gen: number of segments")->capture_default_str();
    app.add_option("--zigzag-h", cfg.zigzag_h, "Gen: zigzag step height")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    if (app.count("--chernoff-c") > 0)
        cfg.params.chernoff_c = cfg.chernoff_c;

    try {
        cfg.params.validate();
        if ((cfg.mode == Mode::estimate || cfg.mode == Mode::oracle) && cfg.input_path.empty()) {
            std::cerr << "error: --input is required in this mode\n";
            return 2;
        }
        switch (cfg.mode) {
        case Mode::estimate:
            return run_estimate(cfg);
        case Mode::oracle:
#ifdef CONGESTION_WITH_ORACLE
            return run_oracle(cfg);
#else
            std::cerr << "error: built without the oracle\n";
            return 2;
#endif
        case Mode::bench:
            return run_bench(cfg);
        case Mode::gen:
            return run_gen(cfg);
        }
    } catch (const congestion::io::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
