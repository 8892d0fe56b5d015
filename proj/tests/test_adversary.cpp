#include "catch_amalgamated.hpp"

#include <set>
#include <sstream>

#include "rotorlab/adversary.hpp"
#include "rotorlab/families.hpp"
#include "rotorlab/walk.hpp"

using namespace rotorlab;

namespace {

std::uint64_t vertex_cover(const Graph& g, const Setup& s) {
    return run_until_vertex_cover(g, s.config, s.start).steps;
}

void check_valid(const Graph& g, const Setup& s) {
    const auto r = validate_config(g, s.config);
    INFO(r.summary());
    CHECK(r.ok());
    CHECK(kappa(g, s.config) == 1.0);
}

}  // namespace

TEST_CASE("Euler circuit traverses every arc of the bidirected graph once") {
    for (const Graph& g : {build_family(Family::complete, {6}), build_family(Family::torus, {3, 4}),
                           random_connected_graph(14, 0.3, 3)}) {
        const auto circ = euler_circuit(g, 0);
        REQUIRE(circ.size() == g.arc_count() + 1);
        CHECK(circ.front() == circ.back());
        std::set<std::pair<vertex, vertex>> seen;
        for (std::size_t i = 0; i + 1 < circ.size(); ++i) {
            CHECK(g.has_edge(circ[i], circ[i + 1]));
            CHECK(seen.insert({circ[i], circ[i + 1]}).second);
        }
    }
}

TEST_CASE("euler_avoid covers no earlier than m - deg(w)") {
    const Graph k4 = build_family(Family::complete, {4});
    const auto s4 = euler_avoid_config(k4);
    check_valid(k4, s4);
    CHECK(vertex_cover(k4, s4) >= k4.m() - 3);

    const Graph star = build_family(Family::star, {9});
    const auto ss = euler_avoid_config(star, vertex{8});
    check_valid(star, ss);
    CHECK(vertex_cover(star, ss) >= 8 - 1);

    const Graph tri = build_family(Family::cycle, {3});
    for (vertex w = 0; w < 3; ++w) CHECK(vertex_cover(tri, euler_avoid_config(tri, w)) >= 1);

    for (std::int64_t n = 4; n <= 40; ++n) {
        const Graph g = build_family(Family::complete, {n});
        const auto s = euler_avoid_config(g);
        CHECK(vertex_cover(g, s) >= g.m() - g.min_degree());
    }
}

TEST_CASE("euler_avoid on random graphs") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Graph g = random_connected_graph(16, 0.25, seed);
        const auto s = euler_avoid_config(g);
        check_valid(g, s);
        const vertex w = euler_avoid_vertex(g);
        // The avoided vertex is only reached after a full tour of G - w.
        const auto r = run_until_first_visit(g, s.config, s.start, w);
        CHECK(r.steps >= 2 * (g.m() - g.degree(w)));
        CHECK(vertex_cover(g, s) >= g.m() - g.min_degree());
    }
}

TEST_CASE("euler_avoid errors") {
    CHECK_THROWS_AS(euler_avoid_config(build_family(Family::path, {2})), GraphTooSmall);
    CHECK_THROWS_AS(euler_avoid_config(build_family(Family::cycle, {4}), vertex{4}), InvalidParameters);
}

TEST_CASE("inward cycle and path configurations") {
    for (std::int64_t n = 3; n <= 41; n += 2) {
        const Graph g = build_family(Family::cycle, {n});
        const auto s = cycle_inward_config(g);
        check_valid(g, s);
        const std::uint64_t k = static_cast<std::uint64_t>(n - 1);
        CHECK(vertex_cover(g, s) == (k * k + k) / 2);
    }
    for (std::int64_t n = 2; n <= 40; ++n) {
        const Graph g = build_family(Family::path, {n});
        const auto s = cycle_inward_config(g);
        check_valid(g, s);
        // Closed form counts positions x_0..x_t, i.e. t + 1.
        const std::uint64_t k = static_cast<std::uint64_t>(n - 1);
        CHECK(vertex_cover(g, s) + 1 == k * k + 1);
    }
    CHECK_THROWS_AS(cycle_inward_config(build_family(Family::cycle, {6})), WrongFamily);
    CHECK_THROWS_AS(cycle_inward_config(build_family(Family::complete, {5})), WrongFamily);
    CHECK_THROWS_AS(cycle_inward_config(random_connected_graph(5, 0.5, 1)), WrongFamily);
}

TEST_CASE("tree_mixed configuration") {
    const Graph t3 = build_family(Family::kary_tree, {2, 3});
    const auto s = tree_mixed_config(t3);
    check_valid(t3, s);
    const auto mixed = vertex_cover(t3, s);
    CHECK(mixed > 4 * t3.n());
    CHECK(mixed > vertex_cover(t3, Setup{canonical_config(t3), 0, std::nullopt}));

    for (std::int64_t k : {2, 3, 5}) {
        const Graph g = build_family(Family::kary_tree, {k, 1});
        CHECK(vertex_cover(g, tree_mixed_config(g)) <= 2 * static_cast<std::uint64_t>(k + 1));
    }
    CHECK_THROWS_AS(tree_mixed_config(build_family(Family::star, {5})), WrongFamily);
}

TEST_CASE("lollipop configuration") {
    const Graph g = build_family(Family::lollipop, {8});
    const auto s = lollipop_config(g);
    check_valid(g, s);
    const std::uint64_t baseline = g.m() - g.min_degree() + 16;
    CHECK(vertex_cover(g, s) > baseline);

    // Path length 0: the rotors are one Euler circuit, so every arc is used in exactly 2m steps.
    const Graph bare = build_family(Family::lollipop, {6, 0});
    const auto sb = lollipop_config(bare);
    check_valid(bare, sb);
    CHECK(run_until_edge_cover(bare, sb.config, sb.start, 0, {}, true).steps == 2 * bare.m());
    CHECK_THROWS_AS(lollipop_config(build_family(Family::complete, {5})), WrongFamily);
}

TEST_CASE("torus origin configuration matches the closed form") {
    for (std::int64_t side = 3; side <= 15; side += 2) {
        const Graph g = build_family(Family::torus, {side, side});
        const auto s = torus_origin_config(g);
        check_valid(g, s);
        const std::uint64_t n = static_cast<std::uint64_t>(side * side);
        const std::uint64_t expected = 2 * (n * static_cast<std::uint64_t>(side) - static_cast<std::uint64_t>(side)) / 3;
        CHECK(vertex_cover(g, s) == expected);
    }
    CHECK(vertex_cover(build_family(Family::torus, {3, 3}), torus_origin_config(build_family(Family::torus, {3, 3}))) == 16);
    CHECK_THROWS_AS(torus_origin_config(build_family(Family::torus, {6, 6})), EvenSide);
    CHECK_THROWS_AS(torus_origin_config(build_family(Family::torus, {5, 7})), WrongFamily);
    CHECK_THROWS_AS(torus_origin_config(build_family(Family::torus, {3, 3, 3})), WrongFamily);
    CHECK_THROWS_AS(torus_origin_config(build_family(Family::cycle, {9})), WrongFamily);
}

TEST_CASE("torus initial directions follow the four cases") {
    // Hand-checked 5x5 picture: left column points right, top row down, right column
    // left, bottom row up, corners by the tie-breaks.
    CHECK(torus_initial_direction(0, 0) == 0);
    CHECK(torus_initial_direction(-2, 0) == 1);
    CHECK(torus_initial_direction(-2, 1) == 1);
    CHECK(torus_initial_direction(-2, 2) == 2);
    CHECK(torus_initial_direction(0, 2) == 2);
    CHECK(torus_initial_direction(2, 2) == 3);
    CHECK(torus_initial_direction(2, -1) == 3);
    CHECK(torus_initial_direction(2, -2) == 0);
    CHECK(torus_initial_direction(-2, -2) == 1);
    CHECK(torus_initial_direction(0, -1) == 0);
    const auto [x, y] = torus_coords(7, torus_vertex(7, -3, 2));
    CHECK(x == -3);
    CHECK(y == 2);
}

TEST_CASE("the 7x7 torus passes through the tabulated phases") {
    // Transcribed table: end step, then the state of rings C1..C3 with '*' marking the
    // ring holding the walker.
    const char* table = R"(1 in* in in
9 cycle* in in
18 out in* in
49 in* cycle in
57 cycle* cycle in
66 out cycle* in
83 out out in*
138 out in* cycle
169 in* cycle cycle
177 cycle* cycle cycle
186 out cycle* cycle
203 out out cycle*)";
    const Graph g = build_family(Family::torus, {7, 7});
    const auto setup = torus_origin_config(g);
    WalkState s = start_walk(g, setup.config, setup.start);
    std::istringstream in(table);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::uint64_t step = 0;
        ls >> step;
        while (s.t < step) step_in_place(g, s);
        const auto [x, y] = torus_coords(7, s.current);
        const std::int64_t walker = std::max(std::abs(x), std::abs(y));
        std::string tok;
        for (std::int64_t ring = 1; ls >> tok; ++ring) {
            const bool here = tok.back() == '*';
            if (here) tok.pop_back();
            INFO("step " << step << " ring " << ring);
            CHECK(std::string(ring_state_name(torus_ring_state(s.config, 7, ring))) == tok);
            if (here) CHECK(walker == ring);
        }
        ++rows;
    }
    CHECK(rows == 12);
}

TEST_CASE("hypercube lexicographic configuration") {
    for (std::int64_t d = 1; d <= 10; ++d) {
        const Graph g = build_family(Family::hypercube, {d});
        const auto s = hypercube_lex_config(g);
        check_valid(g, s);
        REQUIRE(s.target);
        CHECK(*s.target == g.n() - 1);
        const auto r = run_until_first_visit(g, s.config, s.start, *s.target);
        // Closed form is an ordinal (positions counted from 1).
        const std::uint64_t du = static_cast<std::uint64_t>(d);
        CHECK(r.steps + 1 == du + 1 + du * (du - 1) * (std::uint64_t{1} << (du - 1)));
    }
    const Graph h5 = build_family(Family::hypercube, {5});
    const auto s5 = hypercube_lex_config(h5);
    CHECK(run_until_first_visit(h5, s5.config, 0, 31).steps + 1 == 326);
    CHECK_THROWS_AS(hypercube_lex_config(build_family(Family::torus, {4, 4})), WrongFamily);
}

TEST_CASE("expander_tree tours the expander before entering the tree") {
    const Graph g = build_family(Family::tree_anchored_expander, {10, 200, 7});
    const auto s = expander_tree_config(g);
    check_valid(g, s);
    const auto layout = anchored_tree_layout(10, 200);
    std::uint64_t expander_edges = 0;
    for (const Edge& e : g.edges())
        if (e.u >= layout.tree_size) ++expander_edges;
    WalkState st = start_walk(g, s.config, s.start);
    while (st.current >= layout.tree_size) step_in_place(g, st);
    CHECK(st.t >= 2 * expander_edges);

    // Degenerate: d=3 with 4 expander vertices gives a depth-1 tree.
    const Graph small = build_family(Family::tree_anchored_expander, {3, 4, 1});
    const auto ss = expander_tree_config(small);
    check_valid(small, ss);
    std::uint64_t diam = 0;
    for (vertex v = 0; v < small.n(); ++v)
        for (auto x : distances_from(small, v)) diam = std::max<std::uint64_t>(diam, x);
    CHECK(vertex_cover(small, ss) <= 2 * small.m() * (diam + 1));
    CHECK_THROWS_AS(expander_tree_config(build_family(Family::hypercube, {3})), WrongFamily);
}

TEST_CASE("random configurations") {
    const Graph c5 = build_family(Family::cycle, {5});
    CHECK(random_config(c5, 42) == random_config(c5, 42));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto c = random_config(c5, seed);
        CHECK(validate_config(c5, c).ok());
        const auto steps = vertex_cover(c5, Setup{c, 0, std::nullopt});
        CHECK(steps >= 4);
        CHECK(steps <= default_step_cap(c5));
        WalkState s = start_walk(c5, c, 0, {TraceMode::full});
        run_steps(c5, s, 200);
        CHECK(check_priezzhev(s).passed);
        CHECK(check_balance(c5, s).passed);
    }
}

TEST_CASE("build_setup dispatches by name") {
    const Graph g = build_family(Family::cycle, {7});
    CHECK(build_setup("cycle_inward", g).config == cycle_inward_config(g).config);
    CHECK(build_setup("canonical", g, 0, 3).start == 3);
    CHECK(build_setup("random", g, 9).config == random_config(g, 9));
    CHECK(builder_names().size() == 9);
    CHECK_THROWS_AS(build_setup("nonsense", g), InvalidParameters);
    CHECK_THROWS_AS(build_setup("torus_origin", g), WrongFamily);
}
