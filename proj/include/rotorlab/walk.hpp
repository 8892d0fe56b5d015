#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rotorlab/graph.hpp"
#include "rotorlab/rotor.hpp"

namespace rotorlab {

inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

/// One step of a recorded trace. `rotor` is the 1-based rotor index used at `from`.
struct TraceEntry {
    std::uint64_t t = 0;
    vertex from = 0;
    vertex to = 0;
    std::uint32_t rotor = 0;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

enum class TraceMode { off, full, ring };

struct WalkOptions {
    TraceMode trace = TraceMode::off;
    std::size_t ring_capacity = 4096;
};

/// Full state of a rotor walk. Counters follow the conventions
///   sum(visits) == t + 1
///   sum(edge_traversals) + loop_traversals == t
/// where loop_traversals counts self-loop steps of lazy configurations.
struct WalkState {
    RotorConfiguration config;
    vertex start = 0;
    vertex current = 0;
    std::uint64_t t = 0;
    std::vector<std::uint64_t> visits;
    std::vector<std::uint64_t> edge_traversals;  // per arc of the graph
    std::uint64_t loop_traversals = 0;
    std::vector<std::uint64_t> first_visit;      // kNever if unvisited
    std::vector<std::uint8_t> edge_covered;      // per undirected edge id
    std::size_t vertices_covered = 0;
    std::size_t edges_covered = 0;
    std::size_t arcs_covered = 0;

    WalkOptions options;
    std::deque<TraceEntry> trace;

    // Flattened rotor sequences: target and arc id (npos for self-loops) per slot.
    std::vector<std::size_t> slot_offset;
    std::vector<vertex> slot_target;
    std::vector<std::size_t> slot_arc;

    std::size_t n() const { return visits.size(); }
    bool vertex_covered() const { return vertices_covered == visits.size(); }
    bool edge_cover_complete() const { return edges_covered == edge_covered.size(); }
    bool arc_cover_complete() const { return arcs_covered == edge_traversals.size(); }

    std::uint64_t traversals(const Graph& g, vertex u, vertex v) const {
        auto a = g.arc_index(u, v);
        return a ? edge_traversals[*a] : 0;
    }

    /// Set of undirected edge ids traversed so far.
    std::vector<std::size_t> covered_edge_ids() const {
        std::vector<std::size_t> out;
        for (std::size_t e = 0; e < edge_covered.size(); ++e)
            if (edge_covered[e]) out.push_back(e);
        return out;
    }
};

/// Thrown when a cover run hits its step cap; carries the partial state.
class CapExceeded : public Error {
  public:
    CapExceeded(std::uint64_t cap, WalkState state)
        : Error("step cap " + std::to_string(cap) + " exceeded"), cap_(cap), state_(std::move(state)) {}
    std::uint64_t cap() const { return cap_; }
    const WalkState& state() const { return state_; }

  private:
    std::uint64_t cap_;
    WalkState state_;
};

inline std::uint64_t default_step_cap(const Graph& g) {
    return 64ULL * g.n() * std::max<std::size_t>(g.m(), 1);
}

/// Initializes a walk at `start`; x~_0 = start counts as a visit.
inline WalkState start_walk(const Graph& g, const RotorConfiguration& config, vertex start, WalkOptions options = {}) {
    if (start >= g.n()) throw InvalidParameters("start vertex " + std::to_string(start) + " out of range");
    auto report = validate_config(g, config, ChainKind::plain);
    if (!report.at("shape").passed || !report.at("membership").passed || !report.at("pointer_range").passed) {
        throw InvalidParameters("rotor configuration invalid: " + report.summary());
    }
    WalkState s;
    s.config = config;
    s.start = start;
    s.current = start;
    s.options = options;
    s.visits.assign(g.n(), 0);
    s.edge_traversals.assign(g.arc_count(), 0);
    s.first_visit.assign(g.n(), kNever);
    s.edge_covered.assign(g.m(), 0);

    s.slot_offset.resize(g.n() + 1, 0);
    for (vertex u = 0; u < g.n(); ++u) s.slot_offset[u + 1] = s.slot_offset[u] + config.length(u);
    s.slot_target.reserve(s.slot_offset.back());
    s.slot_arc.reserve(s.slot_offset.back());
    for (vertex u = 0; u < g.n(); ++u) {
        for (vertex v : config.sequences[u]) {
            s.slot_target.push_back(v);
            s.slot_arc.push_back(v == u ? npos : *g.arc_index(u, v));
        }
    }

    s.visits[start] = 1;
    s.first_visit[start] = 0;
    s.vertices_covered = 1;
    return s;
}

/// Advances the walk by one step: move along the current rotor, then advance it.
inline void step_in_place(const Graph& g, WalkState& s) {
    const vertex u = s.current;
    std::uint32_t& r = s.config.pointers[u];
    const std::size_t slot = s.slot_offset[u] + r;
    const vertex v = s.slot_target[slot];
    const std::size_t arc = s.slot_arc[slot];

    if (s.options.trace != TraceMode::off) {
        if (s.options.trace == TraceMode::ring && s.trace.size() == s.options.ring_capacity) s.trace.pop_front();
        s.trace.push_back({s.t, u, v, r + 1});
    }

    r = (r + 1 == s.slot_offset[u + 1] - s.slot_offset[u]) ? 0 : r + 1;
    ++s.t;
    if (arc == npos) {
        ++s.loop_traversals;
    } else {
        if (s.edge_traversals[arc]++ == 0) ++s.arcs_covered;
        const std::size_t e = g.arc_edge(arc);
        if (!s.edge_covered[e]) {
            s.edge_covered[e] = 1;
            ++s.edges_covered;
        }
    }
    if (s.visits[v]++ == 0) {
        s.first_visit[v] = s.t;
        ++s.vertices_covered;
    }
    s.current = v;
}

/// Pure variant of step_in_place.
inline WalkState step(const Graph& g, WalkState s) {
    step_in_place(g, s);
    return s;
}

inline void run_steps(const Graph& g, WalkState& s, std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps; ++i) step_in_place(g, s);
}

struct RunResult {
    std::uint64_t steps = 0;
    WalkState state;
};

template <class Done>
RunResult run_until(const Graph& g, const RotorConfiguration& config, vertex start, std::uint64_t cap, Done done,
                    WalkOptions options = {}) {
    if (cap == 0) throw InvalidParameters("step cap must be positive");
    WalkState s = start_walk(g, config, start, options);
    while (!done(s)) {
        if (s.t >= cap) throw CapExceeded(cap, std::move(s));
        step_in_place(g, s);
    }
    return {s.t, std::move(s)};
}

/// Smallest t with {x~_0..x~_t} = V.
inline RunResult run_until_vertex_cover(const Graph& g, const RotorConfiguration& config, vertex start,
                                        std::uint64_t cap = 0, WalkOptions options = {}) {
    if (cap == 0) cap = default_step_cap(g);
    return run_until(g, config, start, cap, [](const WalkState& s) { return s.vertex_covered(); }, options);
}

/// Smallest t with every undirected edge traversed. `directed` requires every arc instead
/// (diagnostics only).
inline RunResult run_until_edge_cover(const Graph& g, const RotorConfiguration& config, vertex start,
                                      std::uint64_t cap = 0, WalkOptions options = {}, bool directed = false) {
    if (cap == 0) cap = default_step_cap(g);
    if (directed) return run_until(g, config, start, cap, [](const WalkState& s) { return s.arc_cover_complete(); }, options);
    return run_until(g, config, start, cap, [](const WalkState& s) { return s.edge_cover_complete(); }, options);
}

/// Smallest t with x~_t = target.
inline RunResult run_until_first_visit(const Graph& g, const RotorConfiguration& config, vertex start, vertex target,
                                       std::uint64_t cap = 0, WalkOptions options = {}) {
    if (target >= g.n()) throw InvalidParameters("target vertex out of range");
    if (cap == 0) cap = default_step_cap(g);
    return run_until(g, config, start, cap, [target](const WalkState& s) { return s.visits[target] > 0; }, options);
}

/// Trace dump: one "t u v r" line per step.
inline void write_trace(std::ostream& os, const std::deque<TraceEntry>& trace) {
    for (const auto& e : trace) os << e.t << ' ' << e.from << ' ' << e.to << ' ' << e.rotor << '\n';
}

struct PriezzhevResult {
    bool passed = true;
    // Indices into the trace: [a, b] successive uses of one directed edge,
    // [c, d] two uses of another directed edge with a < c < d < b.
    std::size_t a = 0, b = 0, c = 0, d = 0;
    std::string witness;
};

/// Between two successive traversals of a directed edge no other directed edge is
/// traversed twice. Directed edges are rotor slots (from, rotor index), which equal
/// arcs when sequences are permutations. Runs in O(trace).
inline PriezzhevResult check_priezzhev(const std::deque<TraceEntry>& trace) {
    PriezzhevResult res;
    std::unordered_map<std::uint64_t, std::size_t> last;
    constexpr std::size_t none = npos;
    std::size_t best_prev = none, best_at = none;  // argmax over p < b of prev[p]
    for (std::size_t p = 0; p < trace.size(); ++p) {
        const std::uint64_t key = (std::uint64_t{trace[p].from} << 32) | trace[p].rotor;
        auto it = last.find(key);
        const std::size_t prev = it == last.end() ? none : it->second;
        if (prev != none && best_prev != none && best_prev > prev) {
            res.passed = false;
            res.a = prev;
            res.b = p;
            res.c = best_prev;
            res.d = best_at;
            const auto& x = trace[p];
            const auto& y = trace[best_at];
            res.witness = "edge " + std::to_string(x.from) + "->" + std::to_string(x.to) + " at steps " +
                          std::to_string(trace[prev].t) + "," + std::to_string(x.t) + " encloses two uses of " +
                          std::to_string(y.from) + "->" + std::to_string(y.to) + " at steps " +
                          std::to_string(trace[best_prev].t) + "," + std::to_string(y.t);
            return res;
        }
        if (prev != none && (best_prev == none || prev > best_prev)) {
            best_prev = prev;
            best_at = p;
        }
        last[key] = p;
    }
    return res;
}

inline PriezzhevResult check_priezzhev(const WalkState& s) { return check_priezzhev(s.trace); }

struct BalanceResult {
    bool passed = true;
    vertex u = 0, v = 0, w = 0;
    std::uint64_t in_count = 0, out_count = 0;
    std::string witness;
};

/// |N(u->v) - N(v->w)| <= bound for all edges {u,v},{v,w}. Per vertex v it suffices to
/// compare the extreme in-arc counts with the extreme out-arc counts.
inline BalanceResult check_balance(const Graph& g, const std::vector<std::uint64_t>& edge_traversals,
                                   std::uint64_t bound = 2) {
    BalanceResult res;
    if (edge_traversals.size() != g.arc_count()) throw DimensionMismatch("edge_traversals size != arc count");
    for (vertex v = 0; v < g.n(); ++v) {
        auto nb = g.neighbors(v);
        if (nb.empty()) continue;
        std::size_t in_min = 0, in_max = 0, out_min = 0, out_max = 0;
        auto in_count = [&](std::size_t i) { return edge_traversals[*g.arc_index(nb[i], v)]; };
        auto out_count = [&](std::size_t i) { return edge_traversals[g.arc_offset(v) + i]; };
        for (std::size_t i = 1; i < nb.size(); ++i) {
            if (in_count(i) < in_count(in_min)) in_min = i;
            if (in_count(i) > in_count(in_max)) in_max = i;
            if (out_count(i) < out_count(out_min)) out_min = i;
            if (out_count(i) > out_count(out_max)) out_max = i;
        }
        auto report = [&](std::size_t i, std::size_t o) {
            res.passed = false;
            res.u = nb[i];
            res.v = v;
            res.w = nb[o];
            res.in_count = in_count(i);
            res.out_count = out_count(o);
            res.witness = "N(" + std::to_string(res.u) + "->" + std::to_string(v) + ")=" + std::to_string(res.in_count) +
                          " vs N(" + std::to_string(v) + "->" + std::to_string(res.w) + ")=" +
                          std::to_string(res.out_count);
        };
        if (in_count(in_max) > out_count(out_min) + bound) {
            report(in_max, out_min);
            return res;
        }
        if (out_count(out_max) > in_count(in_min) + bound) {
            report(in_min, out_max);
            return res;
        }
    }
    return res;
}

inline BalanceResult check_balance(const Graph& g, const WalkState& s, std::uint64_t bound = 2) {
    return check_balance(g, s.edge_traversals, bound);
}

/// Counter conservation; returns an empty string when consistent.
inline std::string check_counters(const Graph& g, const WalkState& s) {
    std::uint64_t vs = 0, es = 0;
    for (auto x : s.visits) vs += x;
    for (auto x : s.edge_traversals) es += x;
    if (vs != s.t + 1) return "sum(visits)=" + std::to_string(vs) + " != t+1=" + std::to_string(s.t + 1);
    if (es + s.loop_traversals != s.t)
        return "sum(edge_traversals)+loops=" + std::to_string(es + s.loop_traversals) + " != t=" + std::to_string(s.t);
    std::size_t covered = 0;
    for (std::size_t e = 0; e < g.m(); ++e) {
        const Edge& ed = g.edges()[e];
        const bool seen = s.traversals(g, ed.u, ed.v) + s.traversals(g, ed.v, ed.u) > 0;
        if (seen != static_cast<bool>(s.edge_covered[e])) return "covered flag wrong on edge " + std::to_string(e);
        covered += seen;
    }
    if (covered != s.edges_covered) return "edges_covered count wrong";
    return {};
}

}  // namespace rotorlab
