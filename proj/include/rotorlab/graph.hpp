#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rotorlab/error.hpp"

namespace rotorlab {

using vertex = std::uint32_t;
using weight_t = std::uint32_t;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct Edge {
    vertex u = 0;
    vertex v = 0;
    weight_t w = 1;

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Family {
    cycle,
    path,
    complete,
    star,
    kary_tree,
    hypercube,
    torus,
    lollipop,
    random_regular,
    tree_anchored_expander,
};

/// Names one of the generated graph classes plus its integer parameters.
///
/// Parameter layout per family:
///   cycle(n), path(n), complete(n), star(n)
///   kary_tree(k, depth)
///   hypercube(d)
///   torus(L1, ..., Ld)
///   lollipop(n) or lollipop(clique, path_length)
///   random_regular(n, d, seed)
///   tree_anchored_expander(d, expander_size, seed)
struct FamilySpec {
    Family tag = Family::cycle;
    std::vector<std::int64_t> params;

    friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::cycle: return "cycle";
        case Family::path: return "path";
        case Family::complete: return "complete";
        case Family::star: return "star";
        case Family::kary_tree: return "kary_tree";
        case Family::hypercube: return "hypercube";
        case Family::torus: return "torus";
        case Family::lollipop: return "lollipop";
        case Family::random_regular: return "random_regular";
        case Family::tree_anchored_expander: return "tree_anchored_expander";
    }
    return "unknown";
}

inline Family parse_family_name(std::string_view name) {
    for (Family f : {Family::cycle, Family::path, Family::complete, Family::star, Family::kary_tree,
                     Family::hypercube, Family::torus, Family::lollipop, Family::random_regular,
                     Family::tree_anchored_expander}) {
        if (family_name(f) == name) return f;
    }
    throw ParseError("unknown graph family '" + std::string(name) + "'");
}

/// "torus(7,7)" style rendering; parse_family_spec is its inverse.
inline std::string to_string(const FamilySpec& spec) {
    std::string out(family_name(spec.tag));
    out += '(';
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(spec.params[i]);
    }
    out += ')';
    return out;
}

inline FamilySpec parse_family_spec(std::string_view text) {
    auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') {
        throw ParseError("expected family(p1,p2,...) but got '" + std::string(text) + "'");
    }
    FamilySpec spec;
    spec.tag = parse_family_name(text.substr(0, open));
    std::string inner(text.substr(open + 1, text.size() - open - 2));
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            spec.params.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw ParseError("bad family parameter '" + item + "'");
        }
    }
    return spec;
}

/// Undirected graph with sorted adjacency lists and positive integer weights.
///
/// Storage is CSR: the neighbors of u occupy arcs [offset(u), offset(u+1)). Every
/// arc knows its undirected edge id; edges are numbered in (u, v), u < v order.
/// Instances produced by from_edges() satisfy all invariants checked by validate();
/// from_adjacency_unchecked() exists so that broken inputs can be inspected.
class Graph {
  public:
    Graph() = default;

    static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
        std::vector<std::vector<std::pair<vertex, weight_t>>> adj(n);
        for (const Edge& e : edges) {
            if (e.u >= n || e.v >= n) {
                throw InvalidParameters("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                        ") out of range for n=" + std::to_string(n));
            }
            if (e.u == e.v) throw InvalidParameters("self-loop at vertex " + std::to_string(e.u));
            if (e.w == 0) throw InvalidParameters("zero edge weight");
            adj[e.u].emplace_back(e.v, e.w);
            adj[e.v].emplace_back(e.u, e.w);
        }
        Graph g;
        g.offsets_.assign(n + 1, 0);
        for (std::size_t u = 0; u < n; ++u) {
            auto& list = adj[u];
            std::sort(list.begin(), list.end());
            for (std::size_t i = 1; i < list.size(); ++i) {
                if (list[i].first == list[i - 1].first) {
                    throw InvalidParameters("parallel edge (" + std::to_string(u) + "," +
                                            std::to_string(list[i].first) + ")");
                }
            }
            g.offsets_[u + 1] = g.offsets_[u] + list.size();
        }
        g.targets_.reserve(g.offsets_[n]);
        g.weights_.reserve(g.offsets_[n]);
        for (auto& list : adj) {
            for (auto [v, w] : list) {
                g.targets_.push_back(v);
                g.weights_.push_back(w);
            }
        }
        g.index_edges();
        auto report_connected = g.bfs_reach(0);
        if (n > 0 && report_connected != n) {
            throw InvalidParameters("graph is not connected (" + std::to_string(report_connected) + " of " +
                                    std::to_string(n) + " vertices reachable from 0)");
        }
        return g;
    }

    /// Takes adjacency lists verbatim. No invariant is enforced.
    static Graph from_adjacency_unchecked(std::vector<std::vector<vertex>> adjacency,
                                          std::vector<std::vector<weight_t>> weights = {}) {
        Graph g;
        const std::size_t n = adjacency.size();
        g.offsets_.assign(n + 1, 0);
        for (std::size_t u = 0; u < n; ++u) {
            g.offsets_[u + 1] = g.offsets_[u] + adjacency[u].size();
            for (std::size_t i = 0; i < adjacency[u].size(); ++i) {
                g.targets_.push_back(adjacency[u][i]);
                g.weights_.push_back(weights.empty() ? 1 : weights[u][i]);
            }
        }
        g.index_edges();
        return g;
    }

    std::size_t n() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t m() const { return edges_.size(); }
    std::size_t arc_count() const { return targets_.size(); }

    std::span<const vertex> neighbors(vertex u) const {
        return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::span<const weight_t> neighbor_weights(vertex u) const {
        return {weights_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::size_t degree(vertex u) const { return offsets_[u + 1] - offsets_[u]; }
    std::size_t arc_offset(vertex u) const { return offsets_[u]; }
    vertex arc_target(std::size_t arc) const { return targets_[arc]; }
    /// Undirected edge id of an arc, or npos when the reverse arc is missing.
    std::size_t arc_edge(std::size_t arc) const { return arc_edge_[arc]; }

    const std::vector<Edge>& edges() const { return edges_; }

    /// Global arc id of u -> v, if {u, v} is an edge.
    std::optional<std::size_t> arc_index(vertex u, vertex v) const {
        auto nb = neighbors(u);
        auto it = std::lower_bound(nb.begin(), nb.end(), v);
        if (it == nb.end() || *it != v) return std::nullopt;
        return offsets_[u] + static_cast<std::size_t>(it - nb.begin());
    }

    bool has_edge(vertex u, vertex v) const { return arc_index(u, v).has_value(); }

    /// c(u, v); zero for non-adjacent pairs.
    weight_t weight(vertex u, vertex v) const {
        auto a = arc_index(u, v);
        return a ? weights_[*a] : 0;
    }

    /// c(u) = sum of incident weights.
    std::uint64_t weighted_degree(vertex u) const {
        std::uint64_t s = 0;
        for (auto w : neighbor_weights(u)) s += w;
        return s;
    }

    weight_t c_max() const {
        weight_t best = 0;
        for (auto w : weights_) best = std::max(best, w);
        return best;
    }

    bool is_weighted() const { return c_max() > 1; }

    std::size_t min_degree() const {
        std::size_t d = std::numeric_limits<std::size_t>::max();
        for (vertex u = 0; u < n(); ++u) d = std::min(d, degree(u));
        return n() == 0 ? 0 : d;
    }
    std::size_t max_degree() const {
        std::size_t d = 0;
        for (vertex u = 0; u < n(); ++u) d = std::max(d, degree(u));
        return d;
    }

    const std::optional<FamilySpec>& family() const { return family_; }
    void set_family(FamilySpec spec) { family_ = std::move(spec); }

  private:
    void index_edges() {
        const std::size_t n = this->n();
        arc_edge_.assign(targets_.size(), npos);
        edges_.clear();
        for (vertex u = 0; u < n; ++u) {
            for (std::size_t a = offsets_[u]; a < offsets_[u + 1]; ++a) {
                vertex v = targets_[a];
                if (u < v && v < n) {
                    arc_edge_[a] = edges_.size();
                    edges_.push_back({u, v, weights_[a]});
                }
            }
        }
        // Reverse arcs pick up the id assigned from the smaller endpoint.
        for (vertex u = 0; u < n; ++u) {
            for (std::size_t a = offsets_[u]; a < offsets_[u + 1]; ++a) {
                vertex v = targets_[a];
                if (v < u) {
                    auto fwd = arc_index(v, u);
                    if (fwd) arc_edge_[a] = arc_edge_[*fwd];
                }
            }
        }
    }

    std::size_t bfs_reach(vertex s) const {
        if (n() == 0) return 0;
        std::vector<char> seen(n(), 0);
        std::vector<vertex> stack{s};
        seen[s] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            vertex u = stack.back();
            stack.pop_back();
            for (vertex v : neighbors(u)) {
                if (v < n() && !seen[v]) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        return count;
    }

    std::vector<std::size_t> offsets_;
    std::vector<vertex> targets_;
    std::vector<weight_t> weights_;
    std::vector<std::size_t> arc_edge_;
    std::vector<Edge> edges_;
    std::optional<FamilySpec> family_;
};

/// Hop distances from s; unreachable vertices get npos.
inline std::vector<std::size_t> distances_from(const Graph& g, vertex s) {
    std::vector<std::size_t> dist(g.n(), npos);
    std::queue<vertex> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
        vertex u = q.front();
        q.pop();
        for (vertex v : g.neighbors(u)) {
            if (dist[v] == npos) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

/// Distance layers: result[k] holds every vertex at distance exactly k from v, ascending.
inline std::vector<std::vector<vertex>> bfs_layers(const Graph& g, vertex v) {
    if (v >= g.n()) throw InvalidParameters("bfs_layers: vertex out of range");
    auto dist = distances_from(g, v);
    std::vector<std::vector<vertex>> layers;
    for (vertex u = 0; u < g.n(); ++u) {
        if (dist[u] == npos) continue;
        if (layers.size() <= dist[u]) layers.resize(dist[u] + 1);
        layers[dist[u]].push_back(u);
    }
    return layers;
}

struct Check {
    std::string name;
    bool passed = true;
    std::string counterexample;
};

/// Named pass/fail checks, each carrying the first counterexample found.
struct ValidationReport {
    std::vector<Check> checks;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }

    const Check& at(std::string_view name) const {
        for (const auto& c : checks) {
            if (c.name == name) return c;
        }
        throw std::out_of_range("no check named " + std::string(name));
    }

    std::string summary() const {
        std::string out;
        for (const auto& c : checks) {
            out += c.name + (c.passed ? "=pass" : "=fail(" + c.counterexample + ")") + " ";
        }
        return out;
    }
};

inline ValidationReport validate(const Graph& g) {
    ValidationReport report;
    const std::size_t n = g.n();

    Check simple{"simple", true, {}};
    Check sorted{"sorted", true, {}};
    Check symmetric{"symmetric", true, {}};
    for (vertex u = 0; u < n && (simple.passed || sorted.passed || symmetric.passed); ++u) {
        auto nb = g.neighbors(u);
        auto wt = g.neighbor_weights(u);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            vertex v = nb[i];
            if (simple.passed && (v == u || v >= n)) {
                simple.passed = false;
                simple.counterexample = "bad entry " + std::to_string(v) + " in adjacency(" + std::to_string(u) + ")";
            }
            if (i > 0 && nb[i - 1] >= v) {
                if (simple.passed && nb[i - 1] == v) {
                    simple.passed = false;
                    simple.counterexample = "parallel entries (" + std::to_string(u) + "," + std::to_string(v) + ")";
                }
                if (sorted.passed) {
                    sorted.passed = false;
                    sorted.counterexample = "adjacency(" + std::to_string(u) + ") not ascending at position " +
                                            std::to_string(i);
                }
            }
            if (symmetric.passed && v < n && v != u) {
                auto back = g.neighbors(v);
                auto it = std::find(back.begin(), back.end(), u);
                if (it == back.end()) {
                    symmetric.passed = false;
                    symmetric.counterexample = "(" + std::to_string(u) + "," + std::to_string(v) +
                                               ") present but (" + std::to_string(v) + "," + std::to_string(u) +
                                               ") missing";
                } else {
                    auto wback = g.neighbor_weights(v)[static_cast<std::size_t>(it - back.begin())];
                    if (wback != wt[i] || wt[i] == 0) {
                        symmetric.passed = false;
                        symmetric.counterexample = "weight mismatch on (" + std::to_string(u) + "," +
                                                   std::to_string(v) + ")";
                    }
                }
            }
        }
    }

    Check connected{"connected", true, {}};
    if (n > 0) {
        std::vector<char> seen(n, 0);
        std::vector<vertex> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            vertex u = stack.back();
            stack.pop_back();
            for (vertex v : g.neighbors(u)) {
                if (v < n && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (vertex u = 0; u < n; ++u) {
            if (!seen[u]) {
                connected.passed = false;
                connected.counterexample = "vertex " + std::to_string(u) + " unreachable from 0";
                break;
            }
        }
    }

    report.checks = {simple, symmetric, connected, sorted};
    return report;
}

}  // namespace rotorlab
