#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rotorlab/families.hpp"
#include "rotorlab/graph.hpp"
#include "rotorlab/rotor.hpp"

namespace rotorlab {

/// A configuration together with the start vertex it was designed for.
struct Setup {
    RotorConfiguration config;
    vertex start = 0;
    /// Vertex whose first visit is the measured quantity (hypercube construction).
    std::optional<vertex> target;
};

/// Euler circuit of the bidirected graph induced on the vertices with keep[v] != 0,
/// restricted to the component of `start`. Hierholzer with the smallest unused
/// successor taken first. Returns the closed vertex walk (front == back).
inline std::vector<vertex> euler_circuit(const Graph& g, vertex start, const std::vector<std::uint8_t>& keep = {}) {
    auto kept = [&](vertex v) { return keep.empty() || keep[v]; };
    std::vector<std::size_t> next(g.n(), 0);
    std::vector<vertex> stack{start}, circuit;
    while (!stack.empty()) {
        const vertex u = stack.back();
        auto nb = g.neighbors(u);
        while (next[u] < nb.size() && !kept(nb[next[u]])) ++next[u];
        if (next[u] < nb.size()) {
            stack.push_back(nb[next[u]++]);
        } else {
            circuit.push_back(u);
            stack.pop_back();
        }
    }
    std::reverse(circuit.begin(), circuit.end());
    return circuit;
}

namespace detail {

/// Exit order of each vertex along a closed walk.
inline std::vector<std::vector<vertex>> exit_orders(std::size_t n, const std::vector<vertex>& circuit) {
    std::vector<std::vector<vertex>> order(n);
    for (std::size_t i = 0; i + 1 < circuit.size(); ++i) order[circuit[i]].push_back(circuit[i + 1]);
    return order;
}

inline const FamilySpec& require_family(const Graph& g, std::initializer_list<Family> allowed, const char* builder) {
    if (g.family()) {
        for (Family f : allowed)
            if (g.family()->tag == f) return *g.family();
    }
    std::string names;
    for (Family f : allowed) names += (names.empty() ? "" : "/") + std::string(family_name(f));
    throw WrongFamily(std::string(builder) + " needs a " + names + " graph, got " +
                      (g.family() ? to_string(*g.family()) : std::string("an unlabeled graph")));
}

inline bool connected_without(const Graph& g, vertex w) {
    const vertex s = w == 0 ? 1 : 0;
    std::vector<std::uint8_t> seen(g.n(), 0);
    seen[w] = 1;
    seen[s] = 1;
    std::vector<vertex> stack{s};
    std::size_t count = 1;
    while (!stack.empty()) {
        vertex u = stack.back();
        stack.pop_back();
        for (vertex v : g.neighbors(u))
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == g.n() - 1;
}

/// Appends the neighbors of u missing from seq, ascending.
inline void append_missing(const Graph& g, vertex u, std::vector<vertex>& seq) {
    std::vector<vertex> have(seq);
    std::sort(have.begin(), have.end());
    for (vertex v : g.neighbors(u))
        if (!std::binary_search(have.begin(), have.end(), v)) seq.push_back(v);
}

}  // namespace detail

/// Minimum-degree vertex whose removal keeps the graph connected.
inline vertex euler_avoid_vertex(const Graph& g) {
    if (g.n() < 3) throw GraphTooSmall("need at least 3 vertices");
    std::vector<vertex> order(g.n());
    for (vertex v = 0; v < g.n(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](vertex a, vertex b) { return g.degree(a) < g.degree(b); });
    for (vertex w : order)
        if (detail::connected_without(g, w)) return w;
    return order.front();  // unreachable: every connected graph has a non-cut vertex
}

/// Rotors on V\{w} follow an Euler circuit of the bidirected G\{w}; w comes last in
/// every neighbor's rotor order, so the walk tours G\{w} completely before reaching w.
inline Setup euler_avoid_config(const Graph& g, std::optional<vertex> w_opt = std::nullopt) {
    if (g.n() < 3) throw GraphTooSmall("euler_avoid_config needs at least 3 vertices");
    const vertex w = w_opt ? *w_opt : euler_avoid_vertex(g);
    if (w >= g.n()) throw InvalidParameters("avoided vertex out of range");
    std::vector<std::uint8_t> keep(g.n(), 1);
    keep[w] = 0;
    const vertex start = w == 0 ? 1 : 0;
    auto order = detail::exit_orders(g.n(), euler_circuit(g, start, keep));
    Setup s;
    s.start = start;
    s.config.pointers.assign(g.n(), 0);
    s.config.sequences = std::move(order);
    for (vertex u = 0; u < g.n(); ++u) detail::append_missing(g, u, s.config.sequences[u]);
    return s;
}

/// Cycle: vertex v carries label v (v <= n/2) or v - n, every rotor points to the
/// neighbor of smaller absolute label, the rotor of 0 to vertex 1. Path: every rotor
/// points to the smaller id. Start at vertex 0 in both cases.
inline Setup cycle_inward_config(const Graph& g) {
    const auto& fam = detail::require_family(g, {Family::cycle, Family::path}, "cycle_inward_config");
    Setup s;
    s.start = 0;
    s.config = canonical_config(g);
    const std::int64_t n = static_cast<std::int64_t>(g.n());
    if (fam.tag == Family::cycle) {
        if (n % 2 == 0) throw WrongFamily("cycle_inward_config needs an odd cycle, got " + to_string(fam));
        auto label = [n](std::int64_t v) { return v <= n / 2 ? v : v - n; };
        for (vertex v = 0; v < g.n(); ++v) {
            const auto& seq = s.config.sequences[v];
            vertex want = 1;
            if (v != 0) want = std::abs(label(seq[0])) < std::abs(label(seq[1])) ? seq[0] : seq[1];
            s.config.pointers[v] = seq[0] == want ? 0 : 1;
        }
    } else {
        // Sequences are ascending, so entry 0 is the smaller neighbor.
        std::fill(s.config.pointers.begin(), s.config.pointers.end(), 0);
    }
    return s;
}

/// Rotors in children-then-parent order. Vertices below the first child of the root
/// start at the parent, all other inner vertices at their first child, the root at its
/// last child. Start at the root.
inline Setup tree_mixed_config(const Graph& g) {
    const auto& fam = detail::require_family(g, {Family::kary_tree}, "tree_mixed_config");
    const vertex k = static_cast<vertex>(fam.params[0]);
    Setup s;
    s.start = 0;
    s.config.sequences.resize(g.n());
    s.config.pointers.assign(g.n(), 0);
    auto in_left = [k](vertex v) {
        while (v > k) v = (v - 1) / k;
        return v == 1;
    };
    for (vertex v = 0; v < g.n(); ++v) {
        auto& seq = s.config.sequences[v];
        for (vertex c = k * v + 1; c <= k * v + k && c < g.n(); ++c) seq.push_back(c);
        const std::size_t children = seq.size();
        if (v > 0) seq.push_back((v - 1) / k);
        if (v == 0) {
            s.config.pointers[v] = static_cast<std::uint32_t>(children - 1);
        } else if (children > 0 && in_left(v)) {
            s.config.pointers[v] = static_cast<std::uint32_t>(seq.size() - 1);
        }
    }
    return s;
}

/// Clique rotors follow an Euler circuit of the bidirected clique starting at the
/// junction; the junction's edge to the path comes last. Path rotors point toward the
/// clique. Start at the junction.
inline Setup lollipop_config(const Graph& g) {
    const auto& fam = detail::require_family(g, {Family::lollipop}, "lollipop_config");
    const vertex clique = static_cast<vertex>(fam.params.size() == 1 ? fam.params[0] / 2 : fam.params[0]);
    const vertex junction = clique - 1;
    std::vector<std::uint8_t> keep(g.n(), 0);
    for (vertex v = 0; v < clique; ++v) keep[v] = 1;
    Setup s;
    s.start = junction;
    s.config.pointers.assign(g.n(), 0);
    s.config.sequences = detail::exit_orders(g.n(), euler_circuit(g, junction, keep));
    for (vertex v = 0; v < g.n(); ++v) detail::append_missing(g, v, s.config.sequences[v]);
    return s;
}

/// Direction index (0 up, 1 right, 2 down, 3 left) of the initial rotor at (x, y).
inline int torus_initial_direction(std::int64_t x, std::int64_t y) {
    if (x == 0 && y == 0) return 0;
    if (y <= -1 && y <= -x && y < x) return 0;
    if (x <= -1 && -x > y && x <= y) return 1;
    if (y >= 1 && y >= -x && y > x) return 2;
    return 3;
}

/// Vertex id of centered coordinates (x, y) on a side x side torus; x is the column,
/// y the row, both taken modulo side.
inline vertex torus_vertex(std::int64_t side, std::int64_t x, std::int64_t y) {
    const std::int64_t c = ((x % side) + side) % side;
    const std::int64_t r = ((y % side) + side) % side;
    return static_cast<vertex>(r * side + c);
}

/// Clockwise rotors (up, right, down, left) with the initial rotor pointing toward the
/// origin; start at the origin (vertex 0).
inline Setup torus_origin_config(const Graph& g) {
    const auto& fam = detail::require_family(g, {Family::torus}, "torus_origin_config");
    if (fam.params.size() != 2 || fam.params[0] != fam.params[1])
        throw WrongFamily("torus_origin_config needs a square 2D torus, got " + to_string(fam));
    const std::int64_t side = fam.params[0];
    if (side % 2 == 0) throw EvenSide("torus_origin_config needs an odd side, got " + to_string(fam));
    const std::int64_t L = (side - 1) / 2;
    Setup s;
    s.start = 0;
    s.config.sequences.resize(g.n());
    s.config.pointers.assign(g.n(), 0);
    const std::int64_t dx[4] = {0, 1, 0, -1}, dy[4] = {1, 0, -1, 0};
    for (std::int64_t x = -L; x <= L; ++x) {
        for (std::int64_t y = -L; y <= L; ++y) {
            const vertex v = torus_vertex(side, x, y);
            auto& seq = s.config.sequences[v];
            for (int d = 0; d < 4; ++d) seq.push_back(torus_vertex(side, x + dx[d], y + dy[d]));
            s.config.pointers[v] = static_cast<std::uint32_t>(torus_initial_direction(x, y));
        }
    }
    return s;
}

/// Centered coordinates (x, y) in [-L, L]^2 of a torus vertex.
inline std::pair<std::int64_t, std::int64_t> torus_coords(std::int64_t side, vertex v) {
    const std::int64_t L = (side - 1) / 2;
    auto center = [&](std::int64_t a) { return a > L ? a - side : a; };
    return {center(static_cast<std::int64_t>(v) % side), center(static_cast<std::int64_t>(v) / side)};
}

enum class RingState { in, cycle, out, mixed };

inline std::string_view ring_state_name(RingState s) {
    switch (s) {
        case RingState::in: return "in";
        case RingState::cycle: return "cycle";
        case RingState::out: return "out";
        default: return "mixed";
    }
}

/// Classifies the rotors on ring i (vertices with max(|x|,|y|) = i) of a torus driven by
/// torus_origin_config. Pointers index the (up, right, down, left) sequences.
inline RingState torus_ring_state(const RotorConfiguration& c, std::int64_t side, std::int64_t i) {
    constexpr int U = 0, R = 1, D = 2, Lf = 3;
    auto in_rule = [i](std::int64_t x, std::int64_t y) {
        if (y == i && -i <= x && x < i) return D;
        if (x == i && -i < y && y <= i) return Lf;
        if (y == -i && -i < x && x <= i) return U;
        return R;
    };
    auto cycle_rule = [i](std::int64_t x, std::int64_t y) {
        if (x == -i && -i < y && y <= i) return D;
        if (y == i && -i < x && x <= i) return Lf;
        if (x == i && -i <= y && y < i) return U;
        return R;
    };
    auto out_rule = [i](std::int64_t x, std::int64_t y) {
        if (x == -i && -i < y && y <= i) return Lf;
        if (y == i && -i < x && x <= i && x != 0) return U;
        if ((x == i && -i <= y && y < i) || (y == i && x == 0)) return R;
        return D;
    };
    bool is_in = true, is_cycle = true, is_out = true;
    for (std::int64_t x = -i; x <= i; ++x) {
        for (std::int64_t y = -i; y <= i; ++y) {
            if (std::max(std::abs(x), std::abs(y)) != i) continue;
            const int p = static_cast<int>(c.pointers[torus_vertex(side, x, y)]);
            is_in = is_in && p == in_rule(x, y);
            is_cycle = is_cycle && p == cycle_rule(x, y);
            is_out = is_out && p == out_rule(x, y);
        }
    }
    if (is_in) return RingState::in;
    if (is_cycle) return RingState::cycle;
    if (is_out) return RingState::out;
    return RingState::mixed;
}

/// Rotors sorted lexicographically by neighbor bitstring (= ascending id); start 0^d,
/// target 1^d.
inline Setup hypercube_lex_config(const Graph& g) {
    detail::require_family(g, {Family::hypercube}, "hypercube_lex_config");
    Setup s;
    s.config = canonical_config(g);
    s.start = 0;
    s.target = static_cast<vertex>(g.n() - 1);
    return s;
}

/// Expander rotors follow an Euler circuit of the bidirected expander part, then the
/// tree leaves they are matched to. Tree rotors list children (or matched expander
/// vertices at leaves) before the parent. Start at the first expander vertex.
inline Setup expander_tree_config(const Graph& g) {
    const auto& fam = detail::require_family(g, {Family::tree_anchored_expander}, "expander_tree_config");
    const auto layout = anchored_tree_layout(static_cast<std::size_t>(fam.params[0]),
                                             static_cast<std::size_t>(fam.params[1]));
    const vertex base = static_cast<vertex>(layout.tree_size);
    std::vector<std::uint8_t> keep(g.n(), 0);
    for (vertex v = base; v < g.n(); ++v) keep[v] = 1;
    Setup s;
    s.start = base;
    s.config.pointers.assign(g.n(), 0);
    s.config.sequences = detail::exit_orders(g.n(), euler_circuit(g, base, keep));
    for (vertex v = base; v < g.n(); ++v) detail::append_missing(g, v, s.config.sequences[v]);
    for (vertex v = 0; v < base; ++v) {
        auto& seq = s.config.sequences[v];
        for (vertex u : g.neighbors(v))
            if (v == 0 || u != layout.parent[v]) seq.push_back(u);
        if (v != 0) seq.push_back(layout.parent[v]);
    }
    return s;
}

/// Uniformly random permutation and pointer per vertex; deterministic in seed.
inline RotorConfiguration random_config(const Graph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RotorConfiguration c = canonical_config(g);
    for (vertex u = 0; u < g.n(); ++u) {
        auto& seq = c.sequences[u];
        for (std::size_t i = seq.size(); i > 1; --i) std::swap(seq[i - 1], seq[detail::uniform_index(rng, i)]);
        c.pointers[u] = static_cast<std::uint32_t>(detail::uniform_index(rng, seq.size()));
    }
    return c;
}

inline const std::vector<std::string>& builder_names() {
    static const std::vector<std::string> names{"canonical",    "random",       "euler_avoid",   "cycle_inward",
                                                "tree_mixed",   "lollipop",     "torus_origin",  "hypercube_lex",
                                                "expander_tree"};
    return names;
}

/// Builder lookup by name. "canonical" and "random" start at `start`.
inline Setup build_setup(const std::string& name, const Graph& g, std::uint64_t seed = 0, vertex start = 0) {
    if (name == "canonical") return {canonical_config(g), start, std::nullopt};
    if (name == "random") return {random_config(g, seed), start, std::nullopt};
    if (name == "euler_avoid") return euler_avoid_config(g);
    if (name == "cycle_inward") return cycle_inward_config(g);
    if (name == "tree_mixed") return tree_mixed_config(g);
    if (name == "lollipop") return lollipop_config(g);
    if (name == "torus_origin") return torus_origin_config(g);
    if (name == "hypercube_lex") return hypercube_lex_config(g);
    if (name == "expander_tree") return expander_tree_config(g);
    throw InvalidParameters("unknown configuration builder '" + name + "'");
}

}  // namespace rotorlab
