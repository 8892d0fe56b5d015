#include "catch_amalgamated.hpp"

#include <sstream>

#include "rotorlab/families.hpp"
#include "rotorlab/graph.hpp"
#include "rotorlab/graph_io.hpp"

using namespace rotorlab;

namespace {

std::vector<std::vector<vertex>> as_sets(std::vector<std::vector<vertex>> layers) {
    for (auto& l : layers) std::sort(l.begin(), l.end());
    return layers;
}

}  // namespace

TEST_CASE("from_edges builds sorted CSR adjacency") {
    const std::vector<Edge> edges{{2, 0, 1}, {0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
    const Graph g = Graph::from_edges(4, edges);
    CHECK(g.n() == 4);
    CHECK(g.m() == 4);
    CHECK(g.arc_count() == 8);
    const auto nb = g.neighbors(2);
    CHECK(std::vector<vertex>(nb.begin(), nb.end()) == std::vector<vertex>{0, 1, 3});
    CHECK(g.degree(3) == 1);
    CHECK(g.min_degree() == 1);
    CHECK(g.max_degree() == 3);
    CHECK(g.has_edge(3, 2));
    CHECK_FALSE(g.has_edge(0, 3));
    CHECK(g.weight(0, 3) == 0);
    CHECK_FALSE(g.is_weighted());
}

TEST_CASE("edge ids are shared by both arcs") {
    const Graph g = build_family(Family::complete, {5});
    for (vertex u = 0; u < g.n(); ++u) {
        for (vertex v : g.neighbors(u)) {
            const auto a = *g.arc_index(u, v);
            const auto b = *g.arc_index(v, u);
            CHECK(g.arc_edge(a) == g.arc_edge(b));
            const Edge& e = g.edges()[g.arc_edge(a)];
            CHECK(e.u == std::min(u, v));
            CHECK(e.v == std::max(u, v));
        }
    }
}

TEST_CASE("weights are symmetric and feed weighted degrees") {
    const std::vector<Edge> edges{{0, 1, 3}, {1, 2, 1}, {0, 2, 2}};
    const Graph g = Graph::from_edges(3, edges);
    CHECK(g.weight(0, 1) == 3);
    CHECK(g.weight(1, 0) == 3);
    CHECK(g.weighted_degree(0) == 5);
    CHECK(g.c_max() == 3);
    CHECK(g.is_weighted());
}

TEST_CASE("from_edges rejects invalid input") {
    SECTION("out of range") {
        const std::vector<Edge> e{{0, 3, 1}};
        CHECK_THROWS_AS(Graph::from_edges(3, e), InvalidParameters);
    }
    SECTION("self loop") {
        const std::vector<Edge> e{{0, 1, 1}, {1, 1, 1}};
        CHECK_THROWS_AS(Graph::from_edges(2, e), InvalidParameters);
    }
    SECTION("parallel edge") {
        const std::vector<Edge> e{{0, 1, 1}, {1, 0, 1}};
        CHECK_THROWS_AS(Graph::from_edges(2, e), InvalidParameters);
    }
    SECTION("zero weight") {
        const std::vector<Edge> e{{0, 1, 0}};
        CHECK_THROWS_AS(Graph::from_edges(2, e), InvalidParameters);
    }
    SECTION("disconnected") {
        const std::vector<Edge> e{{0, 1, 1}, {2, 3, 1}};
        CHECK_THROWS_AS(Graph::from_edges(4, e), InvalidParameters);
    }
}

TEST_CASE("bfs_layers partitions by distance") {
    CHECK(as_sets(bfs_layers(build_family(Family::cycle, {5}), 0)) ==
          std::vector<std::vector<vertex>>{{0}, {1, 4}, {2, 3}});
    CHECK(as_sets(bfs_layers(build_family(Family::complete, {4}), 2)) ==
          std::vector<std::vector<vertex>>{{2}, {0, 1, 3}});
    const auto layers = bfs_layers(build_family(Family::hypercube, {3}), 0);
    REQUIRE(layers.size() == 4);
    CHECK(layers[0].size() == 1);
    CHECK(layers[1].size() == 3);
    CHECK(layers[2].size() == 3);
    CHECK(layers[3].size() == 1);
    CHECK_THROWS_AS(bfs_layers(build_family(Family::cycle, {5}), 5), InvalidParameters);
}

TEST_CASE("bfs_layers agree with distances_from") {
    const Graph g = random_connected_graph(30, 0.1, 7);
    for (vertex v : {0u, 11u, 29u}) {
        const auto d = distances_from(g, v);
        const auto layers = bfs_layers(g, v);
        std::size_t total = 0;
        for (std::size_t k = 0; k < layers.size(); ++k) {
            CHECK_FALSE(layers[k].empty());
            for (vertex u : layers[k]) CHECK(d[u] == k);
            total += layers[k].size();
        }
        CHECK(total == g.n());
    }
}

TEST_CASE("validate passes on generated graphs") {
    const auto r = validate(build_family(Family::cycle, {5}));
    CHECK(r.ok());
    CHECK(r.checks.size() == 4);
    for (const char* name : {"simple", "symmetric", "connected", "sorted"}) CHECK(r.at(name).passed);
}

TEST_CASE("validate names the asymmetric pair") {
    const Graph g = Graph::from_adjacency_unchecked({{1, 2}, {0}, {1}});
    const auto r = validate(g);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.at("symmetric").passed);
    const auto& ce = r.at("symmetric").counterexample;
    CHECK(ce.find('0') != std::string::npos);
    CHECK(ce.find('2') != std::string::npos);
}

TEST_CASE("validate flags two disjoint triangles as disconnected") {
    const Graph g = Graph::from_adjacency_unchecked({{1, 2}, {0, 2}, {0, 1}, {4, 5}, {3, 5}, {3, 4}});
    const auto r = validate(g);
    CHECK(r.at("symmetric").passed);
    CHECK_FALSE(r.at("connected").passed);
    CHECK_FALSE(r.at("connected").counterexample.empty());
}

TEST_CASE("validate flags duplicates, self-loops and unsorted lists") {
    const Graph dup = Graph::from_adjacency_unchecked({{1, 1}, {0, 0}});
    CHECK_FALSE(validate(dup).at("simple").passed);
    const Graph loop = Graph::from_adjacency_unchecked({{0, 1}, {0}});
    CHECK_FALSE(validate(loop).at("simple").passed);
    const Graph unsorted = Graph::from_adjacency_unchecked({{2, 1}, {0}, {0}});
    CHECK_FALSE(validate(unsorted).at("sorted").passed);
    CHECK(validate(unsorted).at("symmetric").passed);
}

TEST_CASE("edge list text round-trips") {
    const Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1, 2}, {1, 2, 1}, {2, 3, 5}, {0, 3, 1}});
    const std::string text = to_edge_list(g);
    CHECK(text == "4 4\n0 1 2\n0 3 1\n1 2 1\n2 3 5\n");
    const Graph h = parse_edge_list(text);
    CHECK(to_edge_list(h) == text);
    CHECK(h.weight(2, 3) == 5);
}

TEST_CASE("edge list parser reports malformed input") {
    CHECK_THROWS_AS(parse_edge_list(""), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 2\n0 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("2 1\n0 1 1\nextra"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 1\n0 1 1\n"), InvalidParameters);  // disconnected
    CHECK_THROWS_AS(load_edge_list("/nonexistent/dir/g.txt"), IoError);
    CHECK_THROWS_AS(save_edge_list("/nonexistent/dir/g.txt", build_family(Family::path, {2})), IoError);
}

TEST_CASE("family specs print and parse") {
    const FamilySpec s = parse_family_spec("torus(7,7)");
    CHECK(s.tag == Family::torus);
    CHECK(s.params == std::vector<std::int64_t>{7, 7});
    CHECK(to_string(s) == "torus(7,7)");
    CHECK(parse_family_spec("cycle(5)").params == std::vector<std::int64_t>{5});
    CHECK_THROWS_AS(parse_family_spec("moebius(5)"), ParseError);
    CHECK_THROWS_AS(parse_family_spec("cycle(5"), ParseError);
    CHECK_THROWS_AS(parse_family_spec("cycle(x)"), ParseError);
}
