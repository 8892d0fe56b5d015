#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "rotorlab/adversary.hpp"
#include "rotorlab/bounds.hpp"
#include "rotorlab/chain.hpp"
#include "rotorlab/concentration.hpp"
#include "rotorlab/families.hpp"
#include "rotorlab/fit.hpp"
#include "rotorlab/graph_io.hpp"
#include "rotorlab/monte_carlo.hpp"
#include "rotorlab/report.hpp"
#include "rotorlab/rotor.hpp"
#include "rotorlab/walk.hpp"

namespace rotorlab {

/// Runs fn(i) for i in [0, count) on `workers` threads. Exceptions are rethrown
/// (the one from the smallest index wins).
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline std::size_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

enum class Metric { vertex_cover, edge_cover, target, mc_vertex, mc_edge };

inline Metric parse_metric(const std::string& s) {
    if (s == "vertex") return Metric::vertex_cover;
    if (s == "edge") return Metric::edge_cover;
    if (s == "target") return Metric::target;
    if (s == "mc-vertex") return Metric::mc_vertex;
    if (s == "mc-edge") return Metric::mc_edge;
    throw InvalidParameters("unknown metric '" + s + "' (vertex|edge|target|mc-vertex|mc-edge)");
}

struct ExperimentSpec {
    Family family = Family::cycle;
    /// Size parameter per instance: n for cycle/path/complete/star/lollipop/random_regular,
    /// depth for kary_tree, dimension for hypercube, side for torus, expander size for
    /// tree_anchored_expander.
    std::vector<std::int64_t> sizes;
    std::string builder = "canonical";
    std::string start = "default";  ///< "default" | "random" | vertex id
    bool vertex_cover = true;
    bool edge_cover = true;
    std::vector<std::uint64_t> horizons;
    std::size_t trials = 0;  ///< Monte Carlo trials per instance (0 = skip)
    std::uint64_t seed = 1;
    std::uint64_t cap = 0;   ///< 0 = 64 n m
    std::int64_t arity = 2;
    std::int64_t degree = 4;
    std::int64_t dims = 2;
    bool analytics = false;
    std::size_t analytics_limit = 256;
    std::size_t workers = 1;
    std::optional<Metric> metric;  ///< fitted quantity; default depends on builder
    std::size_t configs = 1;       ///< random configurations per instance (short-term)
};

inline void validate_spec(const ExperimentSpec& spec) {
    if (spec.sizes.empty()) throw InvalidParameters("no sizes given");
    for (std::size_t i = 1; i < spec.sizes.size(); ++i)
        if (spec.sizes[i] <= spec.sizes[i - 1]) throw InvalidParameters("sizes must be strictly increasing");
    for (std::size_t i = 1; i < spec.horizons.size(); ++i)
        if (spec.horizons[i] <= spec.horizons[i - 1]) throw InvalidParameters("horizons must be strictly increasing");
    if (std::find(builder_names().begin(), builder_names().end(), spec.builder) == builder_names().end())
        throw InvalidParameters("unknown builder '" + spec.builder + "'");
}

inline FamilySpec family_for_size(const ExperimentSpec& spec, std::int64_t size) {
    switch (spec.family) {
        case Family::kary_tree: return {spec.family, {spec.arity, size}};
        case Family::torus: return {spec.family, std::vector<std::int64_t>(static_cast<std::size_t>(spec.dims), size)};
        case Family::random_regular:
            return {spec.family, {size, spec.degree, static_cast<std::int64_t>(mix_seed(spec.seed, size) >> 2)}};
        case Family::tree_anchored_expander:
            return {spec.family, {spec.degree, size, static_cast<std::int64_t>(mix_seed(spec.seed, size) >> 2)}};
        default: return {spec.family, {size}};
    }
}

inline vertex resolve_start(const ExperimentSpec& spec, const Graph& g, const Setup& setup) {
    if (spec.start == "default") return setup.start;
    if (spec.start == "random") return static_cast<vertex>(mix_seed(spec.seed, g.n()) % g.n());
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(spec.start, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != spec.start.size() || pos == 0) throw InvalidParameters("start must be default, random or a vertex id");
    if (v >= g.n()) throw InvalidParameters("start vertex " + spec.start + " out of range");
    return static_cast<vertex>(v);
}

/// Quantity used for fits: explicit metric, else the target visit for targeted
/// builders, else vertex cover.
inline std::optional<double> metric_value(const ReportRow& r, Metric m) {
    auto u = [](const std::optional<std::uint64_t>& x) -> std::optional<double> {
        if (x) return static_cast<double>(*x);
        return std::nullopt;
    };
    switch (m) {
        case Metric::vertex_cover: return u(r.vertex_cover_steps);
        case Metric::edge_cover: return u(r.edge_cover_steps);
        case Metric::target: return u(r.target_first_visit);
        case Metric::mc_vertex: return r.mc_vertex_mean;
        case Metric::mc_edge: return r.mc_edge_mean;
    }
    return std::nullopt;
}

/// Simulates one instance and fills a report row.
inline ReportRow run_instance(const ExperimentSpec& spec, std::int64_t size) {
    const FamilySpec fs = family_for_size(spec, size);
    const Graph g = build_family(fs);
    const Setup setup = build_setup(spec.builder, g, mix_seed(spec.seed, static_cast<std::uint64_t>(size)));
    const vertex start = resolve_start(spec, g, setup);
    const std::uint64_t cap = spec.cap ? spec.cap : default_step_cap(g);

    ReportRow row;
    row.family = std::string(family_name(fs.tag));
    row.graph = to_string(fs);
    row.n = g.n();
    row.m = g.m();
    row.builder = spec.builder;
    row.start = start;
    std::vector<std::string> issues;
    auto attempt = [&](auto&& fn, const char* what) {
        try {
            fn();
        } catch (const CapExceeded&) {
            issues.push_back(std::string(what) + ":cap_exceeded");
        }
    };
    if (setup.target) {
        attempt([&] { row.target_first_visit = run_until_first_visit(g, setup.config, start, *setup.target, cap).steps; },
                "target");
    }
    if (spec.vertex_cover)
        attempt([&] { row.vertex_cover_steps = run_until_vertex_cover(g, setup.config, start, cap).steps; }, "vertex");
    if (spec.edge_cover)
        attempt([&] { row.edge_cover_steps = run_until_edge_cover(g, setup.config, start, cap).steps; }, "edge");
    if (spec.trials > 0) {
        const auto mv = mc_random_walk(g, start, CoverMode::vertex_cover, spec.trials, spec.seed, cap);
        if (mv.completed) {
            row.mc_vertex_mean = mv.mean;
            row.mc_vertex_stderr = mv.stderr_;
        }
        if (mv.cap_exceeded) issues.push_back("mc_vertex:" + std::to_string(mv.cap_exceeded) + "_cap_exceeded");
        if (spec.edge_cover) {
            const auto me = mc_random_walk(g, start, CoverMode::edge_cover, spec.trials, mix_seed(spec.seed, 1), cap);
            if (me.completed) {
                row.mc_edge_mean = me.mean;
                row.mc_edge_stderr = me.stderr_;
            }
            if (me.cap_exceeded) issues.push_back("mc_edge:" + std::to_string(me.cap_exceeded) + "_cap_exceeded");
        }
    }
    if (spec.analytics && g.n() <= spec.analytics_limit) {
        BoundOptions opt;
        opt.divergence = false;
        const Chain plain = build_chain(g, ChainKind::plain);
        const BoundReport br = bound_evaluators(g, plain, sequence_lengths(setup.config), opt);
        row.max_K = br.max_K;
        row.three_max_K = br.edge_cover_bound;
        row.lambda2 = br.lambda2;
        row.flow_total = br.flow_max;
        const Vector psi = divergence_vector(g, build_chain(g, ChainKind::lazy));
        row.psi = psi.maxCoeff();
    }
    if (!issues.empty()) {
        row.status.clear();
        for (const auto& s : issues) row.status += (row.status.empty() ? "" : ";") + s;
    }
    return row;
}

inline void sort_rows(std::vector<ReportRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.family, a.n, a.graph) < std::tie(b.family, b.n, b.graph);
    });
}

struct ScalingResult {
    Report report;
    std::optional<LinearFit> fit;
    std::optional<RatioBand> ratio_n_log_n;
    std::optional<RatioBand> ratio_n_log2_n;
    Metric metric = Metric::vertex_cover;
    std::size_t failures = 0;
};

inline Metric default_metric(const ExperimentSpec& spec) {
    if (spec.metric) return *spec.metric;
    if (spec.builder == "hypercube_lex") return Metric::target;
    return Metric::vertex_cover;
}

inline std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::vertex_cover: return "vertex";
        case Metric::edge_cover: return "edge";
        case Metric::target: return "target";
        case Metric::mc_vertex: return "mc-vertex";
        case Metric::mc_edge: return "mc-edge";
    }
    return "?";
}

/// One row per size plus a log-log fit of the chosen metric against n.
inline ScalingResult run_scaling(const ExperimentSpec& spec) {
    validate_spec(spec);
    ScalingResult res;
    res.metric = default_metric(spec);
    res.report.rows.resize(spec.sizes.size());
    parallel_for(spec.sizes.size(), spec.workers, [&](std::size_t i) { res.report.rows[i] = run_instance(spec, spec.sizes[i]); });
    sort_rows(res.report.rows);

    std::vector<double> xs, ys;
    for (const auto& r : res.report.rows) {
        if (auto y = metric_value(r, res.metric); y && *y > 0) {
            xs.push_back(static_cast<double>(r.n));
            ys.push_back(*y);
        } else {
            ++res.failures;
        }
    }
    auto& s = res.report.summary;
    s["metric"] = std::string(metric_name(res.metric));
    s["instances"] = res.report.rows.size();
    s["failures"] = res.failures;
    if (xs.size() >= 2) {
        res.ratio_n_log_n = ratio_band(xs, ys, 1.0);
        res.ratio_n_log2_n = ratio_band(xs, ys, 2.0);
        s["ratio_n_log_n_spread"] = round6(res.ratio_n_log_n->spread());
        s["ratio_n_log2_n_spread"] = round6(res.ratio_n_log2_n->spread());
    }
    if (xs.size() >= 3) {
        res.fit = loglog_fit(xs, ys);
        s["slope"] = round6(res.fit->slope);
        s["r2"] = round6(res.fit->r2);
        for (auto& r : res.report.rows) {
            r.fit_slope = res.fit->slope;
            r.fit_r2 = res.fit->r2;
        }
    } else {
        s["slope"] = nullptr;
        s["r2"] = nullptr;
    }
    return res;
}

// Exact lower-bound suite ---------------------------------------------------------

struct ExactCase {
    std::string group;
    std::string name;
    std::string relation = "==";  ///< "==" or ">="
    std::uint64_t expected = 0;
    std::uint64_t measured = 0;
    bool passed = false;
    std::string detail;
};

struct ExactOptions {
    std::int64_t max_cycle = 2001;
    std::int64_t max_path = 1001;
    std::vector<std::int64_t> torus_sides{3, 5, 7, 9, 11, 13};
    std::int64_t max_hypercube = 12;
    std::int64_t max_complete = 64;
    std::size_t random_graphs = 50;
    std::uint64_t seed = 1;
};

/// Phase table of the origin-pointing torus walk: step at the end of each phase,
/// ring holding the walker, and rotor states of rings 1..6.
struct TorusPhase {
    std::uint64_t step;
    int walker_ring;
    std::array<RingState, 6> rings;
};

inline const std::vector<TorusPhase>& torus_phase_table() {
    using R = RingState;
    constexpr R i = R::in, c = R::cycle, o = R::out;
    static const std::vector<TorusPhase> table{
        {1, 1, {i, i, i, i, i, i}},   {9, 1, {c, i, i, i, i, i}},   {18, 2, {o, i, i, i, i, i}},
        {49, 1, {i, c, i, i, i, i}},  {57, 1, {c, c, i, i, i, i}},  {66, 2, {o, c, i, i, i, i}},
        {83, 3, {o, o, i, i, i, i}},  {138, 2, {o, i, c, i, i, i}}, {169, 1, {i, c, c, i, i, i}},
        {177, 1, {c, c, c, i, i, i}}, {186, 2, {o, c, c, i, i, i}}, {203, 3, {o, o, c, i, i, i}},
    };
    return table;
}

inline std::vector<ExactCase> torus_phase_cases(std::int64_t side) {
    std::vector<ExactCase> out;
    const Graph g = build_family(Family::torus, {side, side});
    const Setup setup = torus_origin_config(g);
    WalkState s = start_walk(g, setup.config, setup.start);
    const std::int64_t L = (side - 1) / 2;
    for (const auto& ph : torus_phase_table()) {
        while (s.t < ph.step) step_in_place(g, s);
        const auto [x, y] = torus_coords(side, s.current);
        const auto ring = static_cast<std::uint64_t>(std::max(std::abs(x), std::abs(y)));
        ExactCase ec;
        ec.group = "torus_phase";
        ec.name = "torus(" + std::to_string(side) + "," + std::to_string(side) + ") step " + std::to_string(ph.step);
        ec.expected = static_cast<std::uint64_t>(ph.walker_ring);
        ec.measured = ring;
        bool states_ok = true;
        std::string states;
        for (std::int64_t r = 1; r <= std::min<std::int64_t>(L, 6); ++r) {
            const RingState st = torus_ring_state(s.config, side, r);
            states += (r > 1 ? " " : "") + std::string(ring_state_name(st));
            states_ok = states_ok && st == ph.rings[static_cast<std::size_t>(r - 1)];
        }
        ec.passed = ring == ec.expected && states_ok;
        ec.detail = "walker ring " + std::to_string(ring) + ", rings: " + states;
        out.push_back(std::move(ec));
    }
    return out;
}

inline std::vector<ExactCase> run_exact_suite(const ExactOptions& opt = {}) {
    std::vector<ExactCase> out;
    auto add = [&](std::string group, std::string name, std::uint64_t expected, std::uint64_t measured,
                   std::string relation = "==", std::string detail = "") {
        ExactCase c{std::move(group), std::move(name), std::move(relation), expected, measured, false, std::move(detail)};
        c.passed = c.relation == "==" ? measured == expected : measured >= expected;
        out.push_back(std::move(c));
    };

    for (std::int64_t n = 3; n <= opt.max_cycle; n += 2) {
        const Graph g = build_family(Family::cycle, {n});
        const Setup s = cycle_inward_config(g);
        const std::uint64_t k = static_cast<std::uint64_t>(n - 1);
        add("cycle", "cycle(" + std::to_string(n) + ")", (k * k + k) / 2, run_until_vertex_cover(g, s.config, s.start).steps);
    }
    // Counted as walk positions x~_0..x~_t, i.e. t + 1.
    for (std::int64_t n = 2; n <= opt.max_path; ++n) {
        const Graph g = build_family(Family::path, {n});
        const Setup s = cycle_inward_config(g);
        const std::uint64_t t = run_until_vertex_cover(g, s.config, s.start).steps;
        const std::uint64_t k = static_cast<std::uint64_t>(n - 1);
        add("path", "path(" + std::to_string(n) + ")", k * k + 1, t + 1, "==", "steps t=" + std::to_string(t));
    }
    for (std::int64_t side : opt.torus_sides) {
        const Graph g = build_family(Family::torus, {side, side});
        const Setup s = torus_origin_config(g);
        const std::uint64_t q = static_cast<std::uint64_t>(side);
        add("torus", "torus(" + std::to_string(side) + "," + std::to_string(side) + ")", 2 * (q * q * q - q) / 3,
            run_until_vertex_cover(g, s.config, s.start).steps);
    }
    for (std::int64_t side : {std::int64_t{7}, std::int64_t{13}}) {
        auto phases = torus_phase_cases(side);
        out.insert(out.end(), phases.begin(), phases.end());
    }
    // First visit of 1^d, counted as walk positions (t + 1).
    for (std::int64_t d = 1; d <= opt.max_hypercube; ++d) {
        const Graph g = build_family(Family::hypercube, {d});
        const Setup s = hypercube_lex_config(g);
        const std::uint64_t t = run_until_first_visit(g, s.config, s.start, *s.target).steps;
        const std::uint64_t ud = static_cast<std::uint64_t>(d);
        add("hypercube", "hypercube(" + std::to_string(d) + ")", ud + 1 + ud * (ud - 1) * (std::uint64_t{1} << (ud - 1)),
            t + 1, "==", "steps t=" + std::to_string(t));
    }
    for (std::int64_t n = 4; n <= opt.max_complete; ++n) {
        const Graph g = build_family(Family::complete, {n});
        const Setup s = euler_avoid_config(g);
        add("euler", "complete(" + std::to_string(n) + ")", g.m() - g.min_degree(),
            run_until_vertex_cover(g, s.config, s.start).steps, ">=");
    }
    for (std::size_t i = 0; i < opt.random_graphs; ++i) {
        const std::uint64_t seed = mix_seed(opt.seed, 1000 + i);
        const std::size_t n = 3 + seed % 38;
        const double p = 0.05 + static_cast<double>((seed >> 8) % 50) / 100.0;
        const Graph g = random_connected_graph(n, p, seed);
        const Setup s = euler_avoid_config(g);
        add("euler", "random_connected(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + ")",
            g.m() - g.min_degree(), run_until_vertex_cover(g, s.config, s.start).steps, ">=");
    }
    return out;
}

inline Report exact_report(const std::vector<ExactCase>& cases) {
    Report rep;
    std::size_t failed = 0;
    ordered_json arr = ordered_json::array();
    for (const auto& c : cases) {
        ordered_json j;
        j["group"] = c.group;
        j["name"] = c.name;
        j["relation"] = c.relation;
        j["expected"] = c.expected;
        j["measured"] = c.measured;
        j["passed"] = c.passed;
        j["detail"] = c.detail;
        arr.push_back(j);
        failed += !c.passed;
        ReportRow r;
        r.family = c.group;
        r.graph = c.name;
        r.builder = "exact";
        if (c.group == "torus_phase") {
            r.target_first_visit = c.measured;
        } else {
            r.vertex_cover_steps = c.measured;
        }
        r.status = c.passed ? "pass" : "fail";
        rep.rows.push_back(std::move(r));
    }
    rep.summary["cases"] = cases.size();
    rep.summary["failed"] = failed;
    rep.summary["table"] = arr;
    return rep;
}

// Short-term behaviour --------------------------------------------------------------

struct ShortTermPoint {
    std::string graph;
    std::uint64_t config_seed = 0;
    std::uint64_t t = 0;
    std::uint64_t distinct_vertices = 0;
    std::uint64_t distinct_edges = 0;
    double bound = 0.0;  ///< min(m, t, sqrt(t) delta / 13)
    bool passed = true;
};

/// Distinct edges guaranteed after t steps. Capped at m: once every edge is covered
/// the count cannot grow further.
inline double short_term_bound(std::uint64_t t, std::size_t delta, std::size_t m) {
    const double td = static_cast<double>(t);
    return std::min({static_cast<double>(m), td, std::sqrt(td) * static_cast<double>(delta) / 13.0});
}

/// Distinct vertices and edges after each horizon for one configuration.
inline std::vector<ShortTermPoint> short_term_profile(const Graph& g, const RotorConfiguration& config, vertex start,
                                                      const std::vector<std::uint64_t>& horizons) {
    std::vector<ShortTermPoint> out;
    WalkState s = start_walk(g, config, start);
    for (std::uint64_t h : horizons) {
        while (s.t < h) step_in_place(g, s);
        ShortTermPoint p;
        p.t = h;
        p.distinct_vertices = s.vertices_covered;
        p.distinct_edges = s.edges_covered;
        p.bound = short_term_bound(h, g.min_degree(), g.m());
        p.passed = static_cast<double>(p.distinct_edges) >= p.bound;
        out.push_back(p);
    }
    return out;
}

struct ShortTermResult {
    Report report;
    std::vector<ShortTermPoint> points;
    std::size_t violations = 0;
};

inline ShortTermResult run_short_term(const ExperimentSpec& spec) {
    validate_spec(spec);
    if (spec.horizons.empty()) throw InvalidParameters("short-term needs at least one horizon");
    ShortTermResult res;
    std::vector<std::vector<ShortTermPoint>> per(spec.sizes.size());
    std::vector<ReportRow> rows(spec.sizes.size());
    parallel_for(spec.sizes.size(), spec.workers, [&](std::size_t i) {
        const FamilySpec fs = family_for_size(spec, spec.sizes[i]);
        const Graph g = build_family(fs);
        for (std::size_t c = 0; c < std::max<std::size_t>(spec.configs, 1); ++c) {
            const std::uint64_t cseed = mix_seed(spec.seed, 7919 * static_cast<std::uint64_t>(spec.sizes[i]) + c);
            const Setup setup = build_setup(spec.builder, g, cseed);
            ExperimentSpec local = spec;
            local.seed = cseed;
            const vertex start = resolve_start(local, g, setup);
            for (auto p : short_term_profile(g, setup.config, start, spec.horizons)) {
                p.graph = to_string(fs);
                p.config_seed = cseed;
                per[i].push_back(p);
            }
        }
        ReportRow& r = rows[i];
        r.family = std::string(family_name(fs.tag));
        r.graph = to_string(fs);
        r.n = g.n();
        r.m = g.m();
        r.builder = spec.builder;
        r.start = 0;
        const bool ok = std::all_of(per[i].begin(), per[i].end(), [](const ShortTermPoint& p) { return p.passed; });
        r.status = ok ? "ok" : "short_term_violation";
    });
    res.report.rows = rows;
    sort_rows(res.report.rows);
    ordered_json pts = ordered_json::array();
    for (const auto& v : per) {
        for (const auto& p : v) {
            res.points.push_back(p);
            res.violations += !p.passed;
            ordered_json j;
            j["graph"] = p.graph;
            j["config_seed"] = p.config_seed;
            j["t"] = p.t;
            j["distinct_vertices"] = p.distinct_vertices;
            j["distinct_edges"] = p.distinct_edges;
            j["bound"] = round6(p.bound);
            j["passed"] = p.passed;
            pts.push_back(j);
        }
    }
    res.report.summary["checkpoints"] = pts;
    res.report.summary["violations"] = res.violations;
    return res;
}

// Invariant fuzzing -----------------------------------------------------------------

struct FuzzOptions {
    std::size_t cases = 500;
    std::size_t max_n = 24;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> checkpoints{10, 100, 1000, 10000};
    std::size_t workers = 1;
};

/// Everything needed to rerun one fuzz case.
struct FuzzBundle {
    std::uint64_t seed = 0;
    std::size_t index = 0;
    Graph graph;
    RotorConfiguration config;
    vertex start = 0;
    std::vector<std::uint64_t> checkpoints;
};

struct FuzzCaseResult {
    std::size_t index = 0;
    std::size_t n = 0, m = 0;
    std::vector<std::string> violations;
    std::uint64_t trace_hash = 0;
    std::uint64_t lazy_edge_cover = 0;
    double three_max_K = 0.0;
    double max_concentration_residual = -INFINITY;
};

inline FuzzBundle make_fuzz_bundle(const FuzzOptions& opt, std::size_t index) {
    const std::uint64_t s = mix_seed(opt.seed, index);
    FuzzBundle b;
    b.seed = opt.seed;
    b.index = index;
    const std::size_t n = 3 + s % (std::max<std::size_t>(opt.max_n, 3) - 2);
    const double p = static_cast<double>((s >> 16) % 100) / 100.0 * 0.6;
    b.graph = random_connected_graph(n, p, mix_seed(s, 1));
    b.config = random_config(b.graph, mix_seed(s, 2));
    b.start = static_cast<vertex>(mix_seed(s, 3) % n);
    b.checkpoints = opt.checkpoints;
    return b;
}

inline ordered_json to_json(const FuzzBundle& b) {
    ordered_json j;
    j["seed"] = b.seed;
    j["index"] = b.index;
    j["graph"] = to_edge_list(b.graph);
    j["config"] = to_config_text(b.config);
    j["start"] = b.start;
    j["checkpoints"] = b.checkpoints;
    return j;
}

inline FuzzBundle fuzz_bundle_from_json(const ordered_json& j) {
    FuzzBundle b;
    try {
        b.seed = j.at("seed").get<std::uint64_t>();
        b.index = j.at("index").get<std::size_t>();
        b.graph = parse_edge_list(j.at("graph").get<std::string>());
        b.config = parse_config(j.at("config").get<std::string>());
        b.start = j.at("start").get<vertex>();
        b.checkpoints = j.at("checkpoints").get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("replay bundle: ") + e.what());
    }
    return b;
}

/// Runs every invariant on one case:
///  plain walk: counter conservation, balance, Priezzhev, short-term edge bound;
///  lazy walk:  concentration at each checkpoint and edge cover <= 3 max K.
inline FuzzCaseResult run_fuzz_case(const FuzzBundle& b) {
    const Graph& g = b.graph;
    FuzzCaseResult res;
    res.index = b.index;
    res.n = g.n();
    res.m = g.m();
    auto fail = [&](std::string what) {
        if (res.violations.size() < 8) res.violations.push_back(std::move(what));
    };
    const std::uint64_t horizon = b.checkpoints.empty() ? 0 : b.checkpoints.back();

    WalkOptions wo;
    wo.trace = TraceMode::full;
    WalkState s = start_walk(g, b.config, b.start, wo);
    std::size_t cp = 0;
    std::uint64_t hash = 1469598103934665603ULL;
    while (s.t < horizon) {
        step_in_place(g, s);
        hash = (hash ^ s.current) * 1099511628211ULL;
        const bool at_cp = cp < b.checkpoints.size() && s.t == b.checkpoints[cp];
        if (s.t <= 256 || s.t % 64 == 0 || at_cp) {
            if (auto bal = check_balance(g, s); !bal.passed) fail("balance t=" + std::to_string(s.t) + ": " + bal.witness);
            const double bound = short_term_bound(s.t, g.min_degree(), g.m());
            if (static_cast<double>(s.edges_covered) < bound)
                fail("short-term t=" + std::to_string(s.t) + ": " + std::to_string(s.edges_covered) + " edges < " +
                     format6(bound));
        }
        if (at_cp) {
            if (auto msg = check_counters(g, s); !msg.empty()) fail("counters t=" + std::to_string(s.t) + ": " + msg);
            ++cp;
        }
    }
    if (auto pz = check_priezzhev(s); !pz.passed) fail("priezzhev: " + pz.witness);
    res.trace_hash = hash;

    const LazyConfiguration lazy = lazify(g, b.config);
    const Chain chain = build_chain(g, ChainKind::lazy);
    const Vector K = k_functional(chain, sequence_lengths(lazy.config));
    res.three_max_K = 3.0 * K.maxCoeff();
    WalkState ls = start_walk(g, lazy.config, b.start);
    for (std::uint64_t c : b.checkpoints) {
        while (ls.t < c) step_in_place(g, ls);
        const auto cr = concentration_check(g, ls, chain, K);
        res.max_concentration_residual = std::max(res.max_concentration_residual, cr.max_residual);
        if (!cr.passed())
            fail("concentration t=" + std::to_string(c) + " v=" + std::to_string(cr.worst) + " excess " +
                 format6(cr.max_residual));
    }
    const auto cap = static_cast<std::uint64_t>(std::floor(res.three_max_K));
    try {
        res.lazy_edge_cover = run_until_edge_cover(g, lazy.config, b.start, std::max<std::uint64_t>(cap, 1)).steps;
    } catch (const CapExceeded&) {
        fail("lazy edge cover exceeds 3 max K = " + format6(res.three_max_K));
    }
    return res;
}

struct FuzzSummary {
    std::size_t cases = 0;
    std::size_t failing_cases = 0;
    std::vector<FuzzCaseResult> results;
    std::optional<FuzzBundle> first_failure;
    double max_concentration_residual = -INFINITY;
    double min_cover_slack = INFINITY;  ///< min over cases of 3 max K - lazy edge cover
};

inline FuzzSummary run_fuzz(const FuzzOptions& opt) {
    FuzzSummary sum;
    sum.cases = opt.cases;
    sum.results.resize(opt.cases);
    parallel_for(opt.cases, opt.workers, [&](std::size_t i) { sum.results[i] = run_fuzz_case(make_fuzz_bundle(opt, i)); });
    for (const auto& r : sum.results) {
        sum.max_concentration_residual = std::max(sum.max_concentration_residual, r.max_concentration_residual);
        if (r.lazy_edge_cover) sum.min_cover_slack = std::min(sum.min_cover_slack, r.three_max_K - static_cast<double>(r.lazy_edge_cover));
        if (!r.violations.empty()) {
            ++sum.failing_cases;
            if (!sum.first_failure) sum.first_failure = make_fuzz_bundle(opt, r.index);
        }
    }
    return sum;
}

inline Report fuzz_report(const FuzzSummary& sum) {
    Report rep;
    ordered_json failures = ordered_json::array();
    for (const auto& r : sum.results) {
        ReportRow row;
        row.family = "random_connected";
        row.graph = "fuzz#" + std::to_string(r.index);
        row.n = r.n;
        row.m = r.m;
        row.builder = "random";
        row.three_max_K = r.three_max_K;
        if (r.lazy_edge_cover) row.edge_cover_steps = r.lazy_edge_cover;
        row.status = r.violations.empty() ? "ok" : "violation";
        rep.rows.push_back(std::move(row));
        if (!r.violations.empty()) {
            ordered_json j;
            j["index"] = r.index;
            j["violations"] = r.violations;
            failures.push_back(j);
        }
    }
    rep.summary["cases"] = sum.cases;
    rep.summary["failing_cases"] = sum.failing_cases;
    rep.summary["max_concentration_residual"] = round6(sum.max_concentration_residual);
    rep.summary["min_edge_cover_slack"] = std::isfinite(sum.min_cover_slack) ? ordered_json(round6(sum.min_cover_slack)) : ordered_json(nullptr);
    rep.summary["failures"] = failures;
    rep.summary["replay"] = sum.first_failure ? to_json(*sum.first_failure) : ordered_json(nullptr);
    return rep;
}

}  // namespace rotorlab
