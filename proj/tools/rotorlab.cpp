// rotorlab: command-line runner for rotor-walk experiments.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rotorlab/rotorlab.hpp"

using namespace rotorlab;

namespace {

struct Common {
    std::string out;
    std::string format = "json";
};

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ordered_json base_metadata(const std::string& command, int argc, char** argv) {
    ordered_json m;
    m["tool"] = "rotorlab";
    m["command"] = command;
    std::vector<std::string> args(argv, argv + argc);
    m["argv"] = args;
    m["generated_at"] = utc_timestamp();
    return m;
}

void write_report(const Report& rep, const Common& c) {
    const Format fmt = parse_format(c.format);
    if (c.out.empty() || c.out == "-") {
        std::cout << (fmt == Format::csv ? to_csv(rep) : to_json_text(rep));
    } else {
        emit(rep, fmt, c.out);
        std::cerr << "wrote " << c.out << "\n";
    }
}

void add_output_options(CLI::App* app, Common& c) {
    app->add_option("--out", c.out, "Output path (default: stdout)");
    app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_spec_options(CLI::App* app, ExperimentSpec& spec, std::string& family) {
    app->add_option("--family", family, "Graph family")->required();
    app->add_option("--sizes", spec.sizes, "Strictly increasing size parameters")->required()->delimiter(',');
    app->add_option("--builder", spec.builder, "Rotor configuration builder");
    app->add_option("--start", spec.start, "default, random or a vertex id");
    app->add_option("--seed", spec.seed, "Base seed");
    app->add_option("--cap", spec.cap, "Step cap per run (0 = 64 n m)");
    app->add_option("--arity", spec.arity, "k for kary_tree");
    app->add_option("--degree", spec.degree, "d for random_regular and tree_anchored_expander");
    app->add_option("--dims", spec.dims, "Dimensions for torus");
    app->add_option("--workers", spec.workers, "Worker threads");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotor-router walk laboratory"};
    app.require_subcommand(1);
    int status = 0;

    // scaling ---------------------------------------------------------------------
    ExperimentSpec sc;
    std::string sc_family;
    Common sc_out;
    std::string sc_metric;
    std::optional<double> expect_slope;
    double slope_tol = 0.05;
    double min_r2 = 0.98;
    std::optional<double> ratio_power;
    double ratio_max = 3.0;
    bool no_vertex = false, no_edge = false;
    auto* scaling = app.add_subcommand("scaling", "Cover-time sweep with a log-log fit");
    add_spec_options(scaling, sc, sc_family);
    add_output_options(scaling, sc_out);
    scaling->add_option("--trials", sc.trials, "Monte Carlo trials per instance (0 = none)");
    scaling->add_option("--metric", sc_metric, "vertex, edge, target, mc-vertex or mc-edge");
    scaling->add_flag("--analytics", sc.analytics, "Add K, Psi, lambda2 and flow columns");
    scaling->add_option("--analytics-limit", sc.analytics_limit, "Largest n for analytics");
    scaling->add_flag("--no-vertex", no_vertex, "Skip vertex cover runs");
    scaling->add_flag("--no-edge", no_edge, "Skip edge cover runs");
    scaling->add_option("--expect-slope", expect_slope, "Assert the fitted slope");
    scaling->add_option("--slope-tol", slope_tol, "Tolerance for --expect-slope");
    scaling->add_option("--min-r2", min_r2, "Minimum R^2 when asserting a slope");
    scaling->add_option("--ratio-power", ratio_power, "Assert bounded steps/(n log^p n)");
    scaling->add_option("--ratio-max", ratio_max, "Allowed max/min ratio spread");
    scaling->callback([&] {
        sc.family = parse_family_name(sc_family);
        if (!sc_metric.empty()) sc.metric = parse_metric(sc_metric);
        sc.vertex_cover = !no_vertex;
        sc.edge_cover = !no_edge;
        ScalingResult res = run_scaling(sc);
        res.report.metadata = base_metadata("scaling", argc, argv);
        auto& s = res.report.summary;
        bool ok = res.failures == 0;
        if (expect_slope) {
            const bool pass = res.fit && std::abs(res.fit->slope - *expect_slope) <= slope_tol && res.fit->r2 >= min_r2;
            s["assert_slope"] = {{"expected", *expect_slope}, {"tolerance", slope_tol}, {"min_r2", min_r2}, {"passed", pass}};
            ok = ok && pass;
        }
        if (ratio_power) {
            std::vector<double> x, y;
            for (const auto& r : res.report.rows) {
                if (auto v = metric_value(r, res.metric)) {
                    x.push_back(static_cast<double>(r.n));
                    y.push_back(*v);
                }
            }
            ordered_json spread = nullptr;
            bool pass = false;
            if (x.size() >= 2) {
                const double sp = ratio_band(x, y, *ratio_power).spread();
                pass = std::isfinite(sp) && sp <= ratio_max;
                spread = round6(sp);
            }
            s["assert_ratio"] = {{"power", *ratio_power}, {"spread", spread}, {"max_spread", ratio_max}, {"passed", pass}};
            ok = ok && pass;
        }
        s["passed"] = ok;
        write_report(res.report, sc_out);
        if (res.fit)
            std::cerr << "slope " << format6(res.fit->slope) << "  R^2 " << format6(res.fit->r2) << "\n";
        if (!ok) status = 1;
    });

    // exact -----------------------------------------------------------------------
    ExactOptions ex;
    Common ex_out;
    auto* exact = app.add_subcommand("exact", "Exact lower-bound reproduction suite");
    add_output_options(exact, ex_out);
    exact->add_option("--max-cycle", ex.max_cycle, "Largest odd cycle");
    exact->add_option("--max-path", ex.max_path, "Largest path");
    exact->add_option("--torus-sides", ex.torus_sides, "Odd torus sides")->delimiter(',');
    exact->add_option("--max-hypercube", ex.max_hypercube, "Largest hypercube dimension");
    exact->add_option("--max-complete", ex.max_complete, "Largest complete graph for Euler configs");
    exact->add_option("--random-graphs", ex.random_graphs, "Random graphs for Euler configs");
    exact->add_option("--seed", ex.seed, "Seed for the random graphs");
    exact->callback([&] {
        const auto cases = run_exact_suite(ex);
        Report rep = exact_report(cases);
        rep.metadata = base_metadata("exact", argc, argv);
        write_report(rep, ex_out);
        std::size_t failed = 0;
        for (const auto& c : cases) {
            if (!c.passed) {
                ++failed;
                std::cerr << "FAIL " << c.name << ": expected " << c.relation << " " << c.expected << ", measured "
                          << c.measured << " " << c.detail << "\n";
            }
        }
        std::cerr << cases.size() - failed << "/" << cases.size() << " exact cases pass\n";
        if (failed) status = 1;
    });

    // short-term ------------------------------------------------------------------
    ExperimentSpec st;
    std::string st_family;
    Common st_out;
    auto* short_term = app.add_subcommand("short-term", "Distinct vertices and edges after t steps");
    add_spec_options(short_term, st, st_family);
    add_output_options(short_term, st_out);
    short_term->add_option("--horizons", st.horizons, "Increasing step counts")->required()->delimiter(',');
    short_term->add_option("--configs", st.configs, "Configurations per instance");
    short_term->callback([&] {
        st.family = parse_family_name(st_family);
        ShortTermResult res = run_short_term(st);
        res.report.metadata = base_metadata("short-term", argc, argv);
        res.report.summary["passed"] = res.violations == 0;
        write_report(res.report, st_out);
        for (const auto& p : res.points)
            if (!p.passed)
                std::cerr << "FAIL " << p.graph << " seed " << p.config_seed << " t=" << p.t << ": " << p.distinct_edges
                          << " edges < " << format6(p.bound) << "\n";
        if (res.violations) status = 1;
    });

    // fuzz ------------------------------------------------------------------------
    FuzzOptions fz;
    Common fz_out;
    std::string replay_out = "fuzz_replay.json";
    auto* fuzz = app.add_subcommand("fuzz", "Invariant fuzzing on random graphs and configurations");
    add_output_options(fuzz, fz_out);
    fuzz->add_option("--cases", fz.cases, "Number of cases");
    fuzz->add_option("--max-n", fz.max_n, "Largest graph");
    fuzz->add_option("--seed", fz.seed, "Seed");
    fuzz->add_option("--workers", fz.workers, "Worker threads");
    fuzz->add_option("--checkpoints", fz.checkpoints, "Concentration checkpoints")->delimiter(',');
    fuzz->add_option("--replay-out", replay_out, "Where to dump the first failing case");
    fuzz->callback([&] {
        const auto sum = run_fuzz(fz);
        Report rep = fuzz_report(sum);
        rep.metadata = base_metadata("fuzz", argc, argv);
        rep.summary["passed"] = sum.failing_cases == 0;
        write_report(rep, fz_out);
        std::cerr << sum.cases - sum.failing_cases << "/" << sum.cases << " fuzz cases pass\n";
        if (sum.first_failure) {
            std::ofstream f(replay_out);
            if (!f) throw IoError("cannot write replay bundle " + replay_out);
            f << to_json(*sum.first_failure).dump(2) << "\n";
            std::cerr << "replay bundle written to " << replay_out << "\n";
        }
        if (sum.failing_cases) status = 1;
    });

    // replay ----------------------------------------------------------------------
    std::string bundle_path;
    auto* replay = app.add_subcommand("replay", "Rerun one fuzz case from its bundle");
    replay->add_option("bundle", bundle_path, "Replay bundle (JSON)")->required();
    replay->callback([&] {
        std::ifstream in(bundle_path);
        if (!in) throw IoError("cannot open replay bundle " + bundle_path);
        const FuzzBundle b = fuzz_bundle_from_json(ordered_json::parse(in));
        const auto r = run_fuzz_case(b);
        ordered_json j;
        j["index"] = r.index;
        j["n"] = r.n;
        j["m"] = r.m;
        j["trace_hash"] = r.trace_hash;
        j["lazy_edge_cover"] = r.lazy_edge_cover;
        j["3maxK"] = round6(r.three_max_K);
        j["violations"] = r.violations;
        std::cout << j.dump(2) << "\n";
        if (!r.violations.empty()) status = 1;
    });

    // analyze ---------------------------------------------------------------------
    std::string an_graph, an_file, an_builder = "canonical", an_chain = "plain", an_save, an_config_out;
    std::uint64_t an_seed = 1;
    bool an_cesaro = false;
    std::string an_out;
    auto* analyze = app.add_subcommand("analyze", "Bound components for one graph");
    analyze->add_option("--family", an_graph, "Family spec such as torus(7,7)");
    analyze->add_option("--graph-file", an_file, "Edge-list file to analyze");
    analyze->add_option("--builder", an_builder, "Configuration builder (sets d~)");
    analyze->add_option("--seed", an_seed, "Seed for the random builder");
    analyze->add_option("--chain", an_chain, "plain or lazy")->check(CLI::IsMember({"plain", "lazy"}));
    analyze->add_flag("--cesaro", an_cesaro, "Cesaro mode for periodic chains (experimental)");
    analyze->add_option("--save-graph", an_save, "Write the graph as an edge list");
    analyze->add_option("--save-config", an_config_out, "Write the rotor configuration");
    analyze->add_option("--out", an_out, "Output JSON path (default: stdout)");
    analyze->callback([&] {
        if (an_graph.empty() == an_file.empty()) throw InvalidParameters("give exactly one of --family or --graph-file");
        const Graph g = an_file.empty() ? build_family(parse_family_spec(an_graph)) : load_edge_list(an_file);
        if (!an_save.empty()) save_edge_list(an_save, g);
        const Setup setup = build_setup(an_builder, g, an_seed);
        const ChainKind kind = an_chain == "lazy" ? ChainKind::lazy : ChainKind::plain;
        const RotorConfiguration cfg = kind == ChainKind::lazy ? lazify(g, setup.config).config : setup.config;
        if (!an_config_out.empty()) {
            std::ofstream f(an_config_out);
            if (!f) throw IoError("cannot write configuration " + an_config_out);
            write_config(f, cfg);
        }
        BoundOptions opt;
        opt.divergence_options.cesaro = an_cesaro;
        ordered_json j;
        j["metadata"] = base_metadata("analyze", argc, argv);
        j["graph"] = g.family() ? to_string(*g.family()) : an_file;
        j["builder"] = an_builder;
        j["bounds"] = to_json(bound_evaluators(g, build_chain(g, kind), sequence_lengths(cfg), opt));
        if (an_out.empty()) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::ofstream f(an_out);
            if (!f) throw IoError("cannot open output file " + an_out);
            f << j.dump(2) << "\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return status;
}
