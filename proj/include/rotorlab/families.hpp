#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rotorlab/graph.hpp"

namespace rotorlab {

inline constexpr int kMaxPairingAttempts = 1000;

namespace detail {

inline void require(bool cond, const FamilySpec& spec, const std::string& what) {
    if (!cond) throw InvalidParameters(to_string(spec) + ": " + what);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

/// Pairs up stubs[] (vertex ids, each repeated by its degree) into a simple graph.
/// Pairs that would form a loop or a repeated edge are rejected individually; when no
/// admissible pair is left the attempt is abandoned. Returns false on abandonment.
inline bool pair_stubs(std::vector<vertex> stubs, std::mt19937_64& rng, std::vector<Edge>& out,
                       std::vector<std::vector<vertex>>& adj) {
    auto adjacent = [&](vertex a, vertex b) {
        const auto& la = adj[a];
        return std::find(la.begin(), la.end(), b) != la.end();
    };
    while (!stubs.empty()) {
        const std::size_t r = stubs.size();
        bool paired = false;
        for (int tries = 0; tries < 64; ++tries) {
            std::size_t i = uniform_index(rng, r);
            std::size_t j = uniform_index(rng, r);
            if (i == j) continue;
            vertex a = stubs[i], b = stubs[j];
            if (a == b || adjacent(a, b)) continue;
            out.push_back({std::min(a, b), std::max(a, b), 1});
            adj[a].push_back(b);
            adj[b].push_back(a);
            if (i < j) std::swap(i, j);
            stubs[i] = stubs.back();
            stubs.pop_back();
            stubs[j] = stubs.back();
            stubs.pop_back();
            paired = true;
            break;
        }
        if (paired) continue;
        // Sampling keeps failing: enumerate the admissible pairs and draw one of them.
        std::vector<std::pair<std::size_t, std::size_t>> admissible;
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = i + 1; j < r; ++j) {
                if (stubs[i] != stubs[j] && !adjacent(stubs[i], stubs[j])) admissible.emplace_back(i, j);
            }
        }
        if (admissible.empty()) return false;
        auto [i, j] = admissible[uniform_index(rng, admissible.size())];
        vertex a = stubs[i], b = stubs[j];
        out.push_back({std::min(a, b), std::max(a, b), 1});
        adj[a].push_back(b);
        adj[b].push_back(a);
        stubs[j] = stubs.back();
        stubs.pop_back();
        stubs[i] = stubs.back();
        stubs.pop_back();
    }
    return true;
}

inline bool edges_connected(std::size_t n, const std::vector<std::vector<vertex>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<vertex> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        vertex u = stack.back();
        stack.pop_back();
        for (vertex v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n;
}

/// Simple connected d-regular edge set on n vertices via the pairing model.
inline std::vector<Edge> random_regular_edges(std::size_t n, std::size_t d, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < kMaxPairingAttempts; ++attempt) {
        std::vector<vertex> stubs;
        stubs.reserve(n * d);
        for (vertex u = 0; u < n; ++u) stubs.insert(stubs.end(), d, u);
        std::vector<Edge> edges;
        std::vector<std::vector<vertex>> adj(n);
        if (!pair_stubs(std::move(stubs), rng, edges, adj)) continue;
        if (!edges_connected(n, adj)) continue;
        return edges;
    }
    throw InvalidParameters("random_regular(" + std::to_string(n) + "," + std::to_string(d) +
                            "): no simple connected pairing within " + std::to_string(kMaxPairingAttempts) +
                            " attempts");
}

/// d-regular simple bipartite edge set between left[i] and right[i] (equal sizes),
/// i.e. a union of d edge-disjoint perfect matchings.
inline std::vector<Edge> random_bipartite_regular(const std::vector<vertex>& left, const std::vector<vertex>& right,
                                                  std::size_t d, std::size_t n_total, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < kMaxPairingAttempts; ++attempt) {
        std::vector<vertex> ls, rs;
        for (vertex u : left) ls.insert(ls.end(), d, u);
        for (vertex u : right) rs.insert(rs.end(), d, u);
        std::vector<std::vector<vertex>> adj(n_total);
        std::vector<Edge> edges;
        bool failed = false;
        while (!ls.empty() && !failed) {
            bool paired = false;
            for (int tries = 0; tries < 64 && !paired; ++tries) {
                std::size_t i = uniform_index(rng, ls.size());
                std::size_t j = uniform_index(rng, rs.size());
                vertex a = ls[i], b = rs[j];
                if (std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end()) continue;
                edges.push_back({std::min(a, b), std::max(a, b), 1});
                adj[a].push_back(b);
                adj[b].push_back(a);
                ls[i] = ls.back();
                ls.pop_back();
                rs[j] = rs.back();
                rs.pop_back();
                paired = true;
            }
            if (paired) continue;
            std::vector<std::pair<std::size_t, std::size_t>> admissible;
            for (std::size_t i = 0; i < ls.size(); ++i) {
                for (std::size_t j = 0; j < rs.size(); ++j) {
                    if (std::find(adj[ls[i]].begin(), adj[ls[i]].end(), rs[j]) == adj[ls[i]].end()) {
                        admissible.emplace_back(i, j);
                    }
                }
            }
            if (admissible.empty()) {
                failed = true;
                break;
            }
            auto [i, j] = admissible[uniform_index(rng, admissible.size())];
            vertex a = ls[i], b = rs[j];
            edges.push_back({std::min(a, b), std::max(a, b), 1});
            adj[a].push_back(b);
            adj[b].push_back(a);
            ls[i] = ls.back();
            ls.pop_back();
            rs[j] = rs.back();
            rs.pop_back();
        }
        if (!failed) return edges;
    }
    throw InvalidParameters("could not draw " + std::to_string(d) + " disjoint perfect matchings");
}

}  // namespace detail

/// Level structure of the tree half of a tree_anchored_expander graph.
struct AnchoredTreeLayout {
    std::size_t tree_size = 0;       ///< tree vertices are 0 .. tree_size-1 (BFS order, root 0)
    std::size_t expander_size = 0;   ///< expander vertices are tree_size .. tree_size+expander_size-1
    std::vector<std::size_t> level_start;  ///< first vertex id of each tree level, plus an end sentinel
    std::vector<vertex> parent;      ///< parent of each tree vertex (root maps to itself)

    std::size_t depth() const { return level_start.size() - 2; }
    std::size_t leaf_begin() const { return level_start[level_start.size() - 2]; }
};

/// Tree levels: root has d children, inner vertices d-1 children, and the last level is
/// truncated so that it has exactly expander_size leaves (spread evenly, in order).
inline AnchoredTreeLayout anchored_tree_layout(std::size_t d, std::size_t expander_size) {
    AnchoredTreeLayout t;
    t.expander_size = expander_size;
    t.level_start = {0, 1};
    t.parent = {0};
    std::size_t prev_begin = 0, prev_size = 1;
    for (std::size_t level = 1;; ++level) {
        const std::size_t fanout = level == 1 ? d : d - 1;
        const std::size_t full = prev_size * fanout;
        const bool last = full >= expander_size;
        const std::size_t size = last ? expander_size : full;
        const std::size_t begin = t.parent.size();
        // Children of the previous level come in contiguous blocks, ascending by parent.
        for (std::size_t i = 0; i < prev_size; ++i) {
            std::size_t lo = i * size / prev_size, hi = (i + 1) * size / prev_size;
            for (std::size_t c = lo; c < hi; ++c) t.parent.push_back(static_cast<vertex>(prev_begin + i));
        }
        t.level_start.push_back(begin + size);
        prev_begin = begin;
        prev_size = size;
        if (last) break;
    }
    t.tree_size = t.parent.size();
    return t;
}

namespace detail {

inline Graph finish(std::size_t n, const std::vector<Edge>& edges, FamilySpec spec) {
    Graph g = Graph::from_edges(n, edges);
    g.set_family(std::move(spec));
    return g;
}

inline std::int64_t param(const FamilySpec& spec, std::size_t i) {
    require(spec.params.size() > i, spec, "missing parameter #" + std::to_string(i + 1));
    return spec.params[i];
}

}  // namespace detail

/// Builds the graph named by spec; vertex labels per family:
/// cycle/path consecutive, hypercube bitstrings as integers, torus row-major,
/// lollipop clique first then path, star center 0, kary_tree BFS order,
/// tree_anchored_expander tree vertices (BFS) then expander vertices.
inline Graph build_family(const FamilySpec& spec) {
    using detail::param;
    using detail::require;
    std::vector<Edge> edges;
    auto add = [&](std::size_t a, std::size_t b) {
        edges.push_back({static_cast<vertex>(std::min(a, b)), static_cast<vertex>(std::max(a, b)), 1});
    };

    switch (spec.tag) {
        case Family::cycle: {
            require(spec.params.size() == 1, spec, "expects cycle(n)");
            const auto n = param(spec, 0);
            require(n >= 3, spec, "cycle needs n >= 3");
            for (std::int64_t i = 0; i < n; ++i) add(i, (i + 1) % n);
            return detail::finish(n, edges, spec);
        }
        case Family::path: {
            require(spec.params.size() == 1, spec, "expects path(n)");
            const auto n = param(spec, 0);
            require(n >= 2, spec, "path needs n >= 2");
            for (std::int64_t i = 0; i + 1 < n; ++i) add(i, i + 1);
            return detail::finish(n, edges, spec);
        }
        case Family::complete: {
            require(spec.params.size() == 1, spec, "expects complete(n)");
            const auto n = param(spec, 0);
            require(n >= 2, spec, "complete needs n >= 2");
            for (std::int64_t i = 0; i < n; ++i)
                for (std::int64_t j = i + 1; j < n; ++j) add(i, j);
            return detail::finish(n, edges, spec);
        }
        case Family::star: {
            require(spec.params.size() == 1, spec, "expects star(n)");
            const auto n = param(spec, 0);
            require(n >= 2, spec, "star needs n >= 2");
            for (std::int64_t i = 1; i < n; ++i) add(0, i);
            return detail::finish(n, edges, spec);
        }
        case Family::kary_tree: {
            require(spec.params.size() == 2, spec, "expects kary_tree(k, depth)");
            const auto k = param(spec, 0), depth = param(spec, 1);
            require(k >= 2, spec, "kary_tree needs k >= 2");
            require(depth >= 1, spec, "kary_tree needs depth >= 1");
            std::int64_t n = 1, level = 1;
            for (std::int64_t i = 0; i < depth; ++i) {
                level *= k;
                n += level;
                require(n <= (1 << 26), spec, "tree too large");
            }
            for (std::int64_t v = 1; v < n; ++v) add((v - 1) / k, v);
            return detail::finish(n, edges, spec);
        }
        case Family::hypercube: {
            require(spec.params.size() == 1, spec, "expects hypercube(d)");
            const auto d = param(spec, 0);
            require(d >= 1 && d <= 24, spec, "hypercube needs 1 <= d <= 24");
            const std::int64_t n = std::int64_t{1} << d;
            for (std::int64_t v = 0; v < n; ++v)
                for (std::int64_t b = 0; b < d; ++b)
                    if (!(v >> b & 1)) add(v, v | (std::int64_t{1} << b));
            return detail::finish(n, edges, spec);
        }
        case Family::torus: {
            require(!spec.params.empty(), spec, "expects torus(L1, ..., Ld)");
            std::int64_t n = 1;
            for (auto side : spec.params) {
                require(side >= 3, spec, "torus side lengths must be >= 3");
                n *= side;
                require(n <= (1 << 26), spec, "torus too large");
            }
            // Row-major: the last coordinate varies fastest.
            std::vector<std::int64_t> stride(spec.params.size(), 1);
            for (std::size_t i = spec.params.size() - 1; i-- > 0;) stride[i] = stride[i + 1] * spec.params[i + 1];
            for (std::int64_t v = 0; v < n; ++v) {
                for (std::size_t i = 0; i < spec.params.size(); ++i) {
                    const auto side = spec.params[i];
                    const auto coord = (v / stride[i]) % side;
                    const auto next = v + (((coord + 1) % side) - coord) * stride[i];
                    add(v, next);
                }
            }
            return detail::finish(n, edges, spec);
        }
        case Family::lollipop: {
            std::int64_t clique = 0, tail = 0;
            if (spec.params.size() == 1) {
                const auto n = param(spec, 0);
                require(n >= 4, spec, "lollipop(n) needs n >= 4");
                clique = n / 2;
                tail = n - clique;
            } else {
                require(spec.params.size() == 2, spec, "expects lollipop(n) or lollipop(clique, path)");
                clique = param(spec, 0);
                tail = param(spec, 1);
                require(clique >= 2 && tail >= 0, spec, "lollipop needs clique >= 2, path >= 0");
            }
            for (std::int64_t i = 0; i < clique; ++i)
                for (std::int64_t j = i + 1; j < clique; ++j) add(i, j);
            for (std::int64_t i = 0; i < tail; ++i) add(clique - 1 + i, clique + i);
            return detail::finish(clique + tail, edges, spec);
        }
        case Family::random_regular: {
            require(spec.params.size() == 3, spec, "expects random_regular(n, d, seed)");
            const auto n = param(spec, 0), d = param(spec, 1), seed = param(spec, 2);
            require(d >= 2 && d < n, spec, "random_regular needs 2 <= d < n");
            require((n * d) % 2 == 0, spec, "n*d must be even");
            std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
            edges = detail::random_regular_edges(n, d, rng);
            return detail::finish(n, edges, spec);
        }
        case Family::tree_anchored_expander: {
            require(spec.params.size() == 3, spec, "expects tree_anchored_expander(d, expander_size, seed)");
            const auto d = param(spec, 0), size = param(spec, 1), seed = param(spec, 2);
            require(d >= 3, spec, "degree must be >= 3");
            require(size > d, spec, "expander size must exceed d");
            require((size * d) % 2 == 0, spec, "expander_size*d must be even");
            auto layout = anchored_tree_layout(d, size);
            const std::size_t base = layout.tree_size;
            const std::size_t n = base + size;
            for (std::size_t v = 1; v < layout.tree_size; ++v) add(layout.parent[v], v);
            std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
            auto ex = detail::random_regular_edges(size, d, rng);
            for (const auto& e : ex) add(base + e.u, base + e.v);
            std::vector<vertex> leaves, anchors;
            for (std::size_t v = layout.leaf_begin(); v < layout.tree_size; ++v) leaves.push_back(v);
            for (std::size_t v = base; v < n; ++v) anchors.push_back(v);
            auto matched = detail::random_bipartite_regular(leaves, anchors, d, n, rng);
            edges.insert(edges.end(), matched.begin(), matched.end());
            return detail::finish(n, edges, spec);
        }
    }
    throw InvalidParameters("unknown family");
}

inline Graph build_family(Family tag, std::vector<std::int64_t> params) {
    return build_family(FamilySpec{tag, std::move(params)});
}

/// Random connected graph: a random recursive spanning tree plus each remaining pair
/// independently with probability p. Carries no family label.
inline Graph random_connected_graph(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2) throw InvalidParameters("random_connected_graph needs n >= 2");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameters("edge probability must lie in [0,1]");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::uint8_t>> has(n, std::vector<std::uint8_t>(n, 0));
    std::vector<Edge> edges;
    for (std::size_t v = 1; v < n; ++v) {
        const std::size_t u = detail::uniform_index(rng, v);
        has[u][v] = 1;
        edges.push_back({static_cast<vertex>(u), static_cast<vertex>(v), 1});
    }
    std::bernoulli_distribution coin(p);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (!has[u][v] && coin(rng)) edges.push_back({static_cast<vertex>(u), static_cast<vertex>(v), 1});
    return Graph::from_edges(n, edges);
}

}  // namespace rotorlab
