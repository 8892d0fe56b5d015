#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rotorlab/graph.hpp"

namespace rotorlab {

/// Which random walk a rotor configuration is meant to realize.
///   plain: P(u,v) = c(u,v) / c(u)
///   lazy:  P'(u,v) = 1/(Delta+1) on edges, remaining mass on the self-loop
enum class ChainKind { plain, lazy };

inline std::string_view chain_kind_name(ChainKind k) { return k == ChainKind::plain ? "plain" : "lazy"; }

/// Per-vertex rotor sequences and the current rotor pointers.
///
/// sequences[u] may repeat neighbors and may contain u itself (a self-loop of the
/// lazy walk). pointers[u] is 0-based here; the text format writes it 1-based.
struct RotorConfiguration {
    std::vector<std::vector<vertex>> sequences;
    std::vector<std::uint32_t> pointers;

    std::size_t n() const { return sequences.size(); }
    std::size_t length(vertex u) const { return sequences[u].size(); }
    /// Entry the rotor at u currently points to.
    vertex target(vertex u) const { return sequences[u][pointers[u]]; }

    friend bool operator==(const RotorConfiguration&, const RotorConfiguration&) = default;
};

/// Rotor sequence = adjacency list in ascending order, every pointer on the first entry.
inline RotorConfiguration canonical_config(const Graph& g) {
    RotorConfiguration c;
    c.sequences.resize(g.n());
    c.pointers.assign(g.n(), 0);
    for (vertex u = 0; u < g.n(); ++u) {
        auto nb = g.neighbors(u);
        c.sequences[u].assign(nb.begin(), nb.end());
    }
    return c;
}

/// Sequence lengths d~(u).
inline std::vector<std::uint32_t> sequence_lengths(const RotorConfiguration& c) {
    std::vector<std::uint32_t> d(c.n());
    for (std::size_t u = 0; u < c.n(); ++u) d[u] = static_cast<std::uint32_t>(c.sequences[u].size());
    return d;
}

/// kappa~ = max_u d~(u) / deg(u).
inline double kappa(const Graph& g, const RotorConfiguration& c) {
    double k = 0.0;
    for (vertex u = 0; u < g.n(); ++u) {
        if (g.degree(u) == 0) continue;
        k = std::max(k, static_cast<double>(c.length(u)) / static_cast<double>(g.degree(u)));
    }
    return k;
}

struct LazyConfiguration {
    ChainKind chain = ChainKind::lazy;
    RotorConfiguration config;
};

/// Symmetric (lazy) counterpart of an unweighted configuration: the sequence of u is
/// kept as a prefix and padded with self-loops to length (Delta+1)/deg(u) * d~(u).
inline LazyConfiguration lazify(const Graph& g, const RotorConfiguration& c) {
    const std::size_t delta_plus_one = g.max_degree() + 1;
    LazyConfiguration out;
    out.config = c;
    for (vertex u = 0; u < g.n(); ++u) {
        const std::size_t deg = g.degree(u);
        const std::size_t len = c.length(u);
        if ((delta_plus_one * len) % deg != 0) {
            throw DivisibilityError("lazify: (Delta+1)*d~(" + std::to_string(u) + ") = " +
                                    std::to_string(delta_plus_one * len) + " is not a multiple of deg = " +
                                    std::to_string(deg));
        }
        const std::size_t new_len = delta_plus_one * len / deg;
        out.config.sequences[u].resize(new_len, u);
    }
    return out;
}

/// Checks neighbor membership, pointer range, and that entry multiplicities realize
/// the declared chain exactly (integer arithmetic, no tolerance).
inline ValidationReport validate_config(const Graph& g, const RotorConfiguration& c,
                                        ChainKind declared = ChainKind::plain) {
    ValidationReport report;
    Check shape{"shape", true, {}};
    Check membership{"membership", true, {}};
    Check pointer_range{"pointer_range", true, {}};
    Check multiplicity{"multiplicity", true, {}};

    if (c.sequences.size() != g.n() || c.pointers.size() != g.n()) {
        shape.passed = false;
        shape.counterexample = "configuration covers " + std::to_string(c.sequences.size()) + " vertices, graph has " +
                               std::to_string(g.n());
        report.checks = {shape};
        return report;
    }

    const std::uint64_t delta_plus_one = g.max_degree() + 1;
    for (vertex u = 0; u < g.n(); ++u) {
        const auto& seq = c.sequences[u];
        if (pointer_range.passed && (seq.empty() || c.pointers[u] >= seq.size())) {
            pointer_range.passed = false;
            pointer_range.counterexample = "vertex " + std::to_string(u) + " pointer " +
                                           std::to_string(c.pointers[u] + 1) + " outside [1," +
                                           std::to_string(seq.size()) + "]";
        }
        std::map<vertex, std::uint64_t> count;
        for (vertex v : seq) {
            if (membership.passed && v != u && !g.has_edge(u, v)) {
                membership.passed = false;
                membership.counterexample = std::to_string(v) + " in sequence of " + std::to_string(u) +
                                            " is not a neighbor";
            }
            ++count[v];
        }
        if (!multiplicity.passed || seq.empty()) continue;
        const std::uint64_t len = seq.size();
        auto fail = [&](vertex v, const std::string& expected) {
            multiplicity.passed = false;
            multiplicity.counterexample = "vertex " + std::to_string(u) + ": entry " + std::to_string(v) + " appears " +
                                          std::to_string(count[v]) + "/" + std::to_string(len) + " times, expected " +
                                          expected;
        };
        if (declared == ChainKind::plain) {
            const std::uint64_t cu = g.weighted_degree(u);
            if (count.count(u)) {
                fail(u, "0 (plain walks have no self-loops)");
                continue;
            }
            auto nb = g.neighbors(u);
            auto wt = g.neighbor_weights(u);
            for (std::size_t i = 0; i < nb.size(); ++i) {
                // count/len == c(u,v)/c(u)
                if (count[nb[i]] * cu != std::uint64_t{wt[i]} * len) {
                    fail(nb[i], "c(u,v)/c(u) = " + std::to_string(wt[i]) + "/" + std::to_string(cu));
                    break;
                }
            }
        } else {
            const std::uint64_t deg = g.degree(u);
            for (vertex v : g.neighbors(u)) {
                if (count[v] * delta_plus_one != len) {
                    fail(v, "1/(Delta+1)");
                    break;
                }
            }
            if (multiplicity.passed && count[u] * delta_plus_one != len * (delta_plus_one - deg)) {
                fail(u, "1 - deg/(Delta+1)");
            }
        }
    }
    report.checks = {shape, membership, pointer_range, multiplicity};
    return report;
}

// Configuration text format, one line per vertex:
//   u r : s(u,1) s(u,2) ... s(u,d)
// with r the 1-based rotor pointer.

inline void write_config(std::ostream& os, const RotorConfiguration& c) {
    for (std::size_t u = 0; u < c.n(); ++u) {
        os << u << ' ' << c.pointers[u] + 1 << " :";
        for (vertex v : c.sequences[u]) os << ' ' << v;
        os << '\n';
    }
}

inline std::string to_config_text(const RotorConfiguration& c) {
    std::ostringstream os;
    write_config(os, c);
    return os.str();
}

inline RotorConfiguration read_config(std::istream& is) {
    RotorConfiguration c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::uint64_t u = 0, r = 0;
        std::string colon;
        if (!(ls >> u >> r >> colon) || colon != ":") {
            throw ParseError("config line " + std::to_string(lineno) + ": expected 'u r : ...'");
        }
        if (u != c.sequences.size()) {
            throw ParseError("config line " + std::to_string(lineno) + ": vertices must appear in order");
        }
        std::vector<vertex> seq;
        std::uint64_t v = 0;
        while (ls >> v) seq.push_back(static_cast<vertex>(v));
        if (r < 1 || r > seq.size()) throw ParseError("config line " + std::to_string(lineno) + ": pointer out of range");
        c.sequences.push_back(std::move(seq));
        c.pointers.push_back(static_cast<std::uint32_t>(r - 1));
    }
    return c;
}

inline RotorConfiguration parse_config(const std::string& text) {
    std::istringstream is(text);
    return read_config(is);
}

}  // namespace rotorlab
