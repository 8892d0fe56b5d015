#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rotorlab/graph.hpp"

namespace rotorlab {

// Edge-list text format:
//   n m
//   u v w        (m lines, 0-based ids, u < v, sorted by (u, v))

inline void write_edge_list(std::ostream& os, const Graph& g) {
    os << g.n() << ' ' << g.m() << '\n';
    for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

inline std::string to_edge_list(const Graph& g) {
    std::ostringstream os;
    write_edge_list(os, g);
    return os.str();
}

inline Graph read_edge_list(std::istream& is) {
    std::size_t n = 0, m = 0;
    if (!(is >> n >> m)) throw ParseError("edge list: missing 'n m' header");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t u = 0, v = 0, w = 0;
        if (!(is >> u >> v >> w)) throw ParseError("edge list: expected " + std::to_string(m) + " edges, got " +
                                                   std::to_string(i));
        edges.push_back({static_cast<vertex>(u), static_cast<vertex>(v), static_cast<weight_t>(w)});
    }
    std::string extra;
    if (is >> extra) throw ParseError("edge list: trailing data '" + extra + "'");
    return Graph::from_edges(n, edges);
}

inline Graph parse_edge_list(const std::string& text) {
    std::istringstream is(text);
    return read_edge_list(is);
}

inline Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file " + path);
    return read_edge_list(in);
}

inline void save_edge_list(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write graph file " + path);
    write_edge_list(out, g);
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace rotorlab
