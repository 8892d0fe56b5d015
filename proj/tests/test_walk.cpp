#include "catch_amalgamated.hpp"

#include <map>
#include <sstream>

#include "rotorlab/adversary.hpp"
#include "rotorlab/families.hpp"
#include "rotorlab/walk.hpp"

using namespace rotorlab;

namespace {

// Naive oracle: maps keyed by vertex pairs, no CSR, no slot tables.
struct NaiveWalk {
    std::vector<std::vector<vertex>> seq;
    std::vector<std::size_t> ptr;
    vertex at;
    std::vector<std::uint64_t> visits;
    std::map<std::pair<vertex, vertex>, std::uint64_t> arcs;
    std::vector<vertex> path;

    NaiveWalk(const RotorConfiguration& c, vertex s)
        : seq(c.sequences), ptr(c.pointers.begin(), c.pointers.end()), at(s), visits(c.n(), 0), path{s} {
        visits[s] = 1;
    }

    void step() {
        const vertex next = seq[at][ptr[at]];
        ptr[at] = (ptr[at] + 1) % seq[at].size();
        if (next != at) ++arcs[{at, next}];
        at = next;
        ++visits[at];
        path.push_back(at);
    }
};

std::vector<vertex> visit_string(const Graph& g, const RotorConfiguration& c, vertex s, std::uint64_t steps) {
    WalkState st = start_walk(g, c, s);
    std::vector<vertex> out{st.current};
    for (std::uint64_t i = 0; i < steps; ++i) {
        step_in_place(g, st);
        out.push_back(st.current);
    }
    return out;
}

}  // namespace

TEST_CASE("single step on the triangle") {
    const Graph g = build_family(Family::cycle, {3});
    const WalkState s0 = start_walk(g, canonical_config(g), 0);
    const WalkState s1 = step(g, s0);
    CHECK(s1.current == 1);
    CHECK(s1.config.target(0) == 2);
    CHECK(s1.t == 1);
    CHECK(s0.t == 0);  // step() leaves the input untouched
}

TEST_CASE("K2 alternates") {
    const Graph g = build_family(Family::path, {2});
    WalkState s = start_walk(g, canonical_config(g), 0);
    for (std::uint64_t t = 1; t <= 25; ++t) {
        step_in_place(g, s);
        CHECK(s.current == t % 2);
        CHECK(s.visits[0] == (t + 2) / 2);
    }
}

TEST_CASE("six hand-unrolled steps on the triangle") {
    // Rotors start at (1,2), (0,2), (0,1): 0->1, 1->0, 0->2, 2->0, 0->1, 1->2.
    const Graph g = build_family(Family::cycle, {3});
    CHECK(visit_string(g, canonical_config(g), 0, 6) == std::vector<vertex>{0, 1, 0, 2, 0, 1, 2});
}

TEST_CASE("stepper agrees with a naive simulator") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Graph g = random_connected_graph(12, 0.25, seed);
        const auto c = random_config(g, seed * 7 + 1);
        const vertex s = static_cast<vertex>(seed % g.n());
        NaiveWalk oracle(c, s);
        WalkState st = start_walk(g, c, s);
        for (int i = 0; i < 500; ++i) {
            oracle.step();
            step_in_place(g, st);
        }
        CHECK(st.current == oracle.at);
        CHECK(st.visits == oracle.visits);
        CHECK(st.config.pointers == std::vector<std::uint32_t>(oracle.ptr.begin(), oracle.ptr.end()));
        for (const auto& [arc, cnt] : oracle.arcs) CHECK(st.traversals(g, arc.first, arc.second) == cnt);
    }
}

TEST_CASE("counters stay conserved, including self-loops") {
    const Graph g = build_family(Family::star, {5});
    const auto lazy = lazify(g, canonical_config(g));
    WalkState s = start_walk(g, lazy.config, 1);
    for (int i = 0; i < 300; ++i) {
        step_in_place(g, s);
        REQUIRE(check_counters(g, s).empty());
    }
    CHECK(s.loop_traversals > 0);
}

TEST_CASE("start_walk rejects bad input") {
    const Graph g = build_family(Family::cycle, {4});
    CHECK_THROWS_AS(start_walk(g, canonical_config(g), 4), InvalidParameters);
    auto c = canonical_config(g);
    c.sequences[0] = {2};
    CHECK_THROWS_AS(start_walk(g, c, 0), InvalidParameters);
}

TEST_CASE("cover examples") {
    const Graph k2 = build_family(Family::path, {2});
    CHECK(run_until_vertex_cover(k2, canonical_config(k2), 0).steps == 1);
    CHECK(run_until_edge_cover(k2, canonical_config(k2), 0).steps == 1);

    for (std::int64_t n : {3, 4, 9, 20}) {
        const Graph g = build_family(Family::cycle, {n});
        auto c = canonical_config(g);
        for (vertex u = 0; u < g.n(); ++u) c.pointers[u] = c.sequences[u][0] == (u + 1) % n ? 0 : 1;
        CHECK(run_until_edge_cover(g, c, 0).steps == static_cast<std::uint64_t>(n));
    }

    const Graph star = build_family(Family::star, {4});
    CHECK(run_until_edge_cover(star, canonical_config(star), 0).steps == 5);  // center->leaf->center x2, then ->leaf
    CHECK(run_until_edge_cover(star, canonical_config(star), 0, 0, {}, true).steps == 6);
}

TEST_CASE("closed-form cover examples") {
    const Graph c7 = build_family(Family::cycle, {7});
    const auto in7 = cycle_inward_config(c7);
    CHECK(run_until_vertex_cover(c7, in7.config, in7.start).steps == 21);

    const Graph t7 = build_family(Family::torus, {7, 7});
    const auto o7 = torus_origin_config(t7);
    CHECK(run_until_vertex_cover(t7, o7.config, o7.start).steps == 224);
}

TEST_CASE("cap exceeded carries the partial state") {
    const Graph g = build_family(Family::cycle, {50});
    try {
        run_until_vertex_cover(g, canonical_config(g), 0, 10);
        FAIL("expected CapExceeded");
    } catch (const CapExceeded& e) {
        CHECK(e.cap() == 10);
        CHECK(e.state().t == 10);
        CHECK(e.state().vertices_covered < 50);
    }
    CHECK_THROWS_AS(run_until_first_visit(g, canonical_config(g), 0, 50), InvalidParameters);
    CHECK(default_step_cap(g) == 64ULL * 50 * 50);
}

TEST_CASE("first visit times are recorded") {
    const Graph g = build_family(Family::path, {6});
    const auto r = run_until_first_visit(g, canonical_config(g), 0, 5);
    CHECK(r.state.first_visit[5] == r.steps);
    CHECK(r.state.first_visit[0] == 0);
    for (vertex u = 1; u < 5; ++u) CHECK(r.state.first_visit[u] < r.steps);
}

TEST_CASE("vertex cover never exceeds edge cover") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Graph g = random_connected_graph(10, 0.3, seed);
        const auto c = random_config(g, seed);
        CHECK(run_until_vertex_cover(g, c, 0).steps <= run_until_edge_cover(g, c, 0).steps);
    }
}

TEST_CASE("replays are bit-identical") {
    const Graph g = build_family(Family::random_regular, {40, 3, 5});
    const auto c = random_config(g, 11);
    const auto a = run_until_edge_cover(g, c, 3, 0, {TraceMode::full});
    const auto b = run_until_edge_cover(g, c, 3, 0, {TraceMode::full});
    CHECK(a.steps == b.steps);
    CHECK(a.state.trace == b.state.trace);
    CHECK(a.state.visits == b.state.visits);
    CHECK(a.state.config == b.state.config);
}

TEST_CASE("trace dump writes t u v r lines") {
    const Graph g = build_family(Family::cycle, {3});
    WalkState s = start_walk(g, canonical_config(g), 0, {TraceMode::full});
    run_steps(g, s, 3);
    std::ostringstream os;
    write_trace(os, s.trace);
    CHECK(os.str() == "0 0 1 1\n1 1 0 1\n2 0 2 2\n");
}

TEST_CASE("ring trace keeps only the most recent entries") {
    const Graph g = build_family(Family::cycle, {5});
    WalkState s = start_walk(g, canonical_config(g), 0, {TraceMode::ring, 8});
    run_steps(g, s, 100);
    REQUIRE(s.trace.size() == 8);
    CHECK(s.trace.front().t == 92);
    CHECK(s.trace.back().t == 99);
}

TEST_CASE("Priezzhev property holds on walks and fails on forged traces") {
    std::deque<TraceEntry> k2{{0, 0, 1, 1}, {1, 1, 0, 1}, {2, 0, 1, 1}};
    CHECK(check_priezzhev(k2).passed);

    const Graph c5 = build_family(Family::cycle, {5});
    WalkState s = start_walk(c5, canonical_config(c5), 0, {TraceMode::full});
    run_steps(c5, s, 100);
    CHECK(check_priezzhev(s).passed);

    // 0->1 at 0 and 5 encloses two uses of 2->3 (steps 2 and 3).
    std::deque<TraceEntry> forged{{0, 0, 1, 1}, {1, 1, 2, 1}, {2, 2, 3, 1}, {3, 2, 3, 1}, {4, 3, 0, 1}, {5, 0, 1, 1}};
    const auto r = check_priezzhev(forged);
    CHECK_FALSE(r.passed);
    CHECK(r.a == 0);
    CHECK(r.b == 5);
    CHECK(r.c == 2);
    CHECK(r.d == 3);
    CHECK(r.witness.find("2->3") != std::string::npos);
}

TEST_CASE("Priezzhev property holds on random configurations") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Graph g = random_connected_graph(9, 0.35, seed + 100);
        WalkState s = start_walk(g, random_config(g, seed), 0, {TraceMode::full});
        run_steps(g, s, 2000);
        INFO("seed " << seed);
        CHECK(check_priezzhev(s).passed);
    }
}

TEST_CASE("balance holds on walks and fails on forged counters") {
    const Graph p4 = build_family(Family::path, {4});
    CHECK(check_balance(p4, start_walk(p4, canonical_config(p4), 0)).passed);

    for (vertex start = 0; start < 4; ++start) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            WalkState s = start_walk(p4, random_config(p4, seed), start);
            for (int t = 0; t < 10000; ++t) {
                step_in_place(p4, s);
                if (!check_balance(p4, s).passed) FAIL("balance violated at t=" << s.t);
            }
        }
    }

    std::vector<std::uint64_t> forged(p4.arc_count(), 0);
    forged[*p4.arc_index(0, 1)] = 5;
    forged[*p4.arc_index(1, 2)] = 1;
    const auto r = check_balance(p4, forged);
    CHECK_FALSE(r.passed);
    // Vertex 0 sends 5 along 0->1 but received nothing back; it is found first.
    CHECK(r.v == 0);
    CHECK(r.w == 1);
    CHECK(r.out_count == 5);
    CHECK(r.in_count == 0);
    CHECK_THROWS_AS(check_balance(p4, std::vector<std::uint64_t>(3, 0)), DimensionMismatch);
}

TEST_CASE("balance holds on random graphs and configurations") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Graph g = random_connected_graph(11, 0.3, seed + 500);
        WalkState s = start_walk(g, random_config(g, seed), static_cast<vertex>(seed % 11));
        for (int t = 0; t < 3000; ++t) {
            step_in_place(g, s);
            if (t % 7 == 0 && !check_balance(g, s).passed) FAIL("seed " << seed << " t=" << s.t);
        }
    }
}

TEST_CASE("check_counters detects forged counters") {
    const Graph g = build_family(Family::cycle, {5});
    WalkState s = start_walk(g, canonical_config(g), 0);
    run_steps(g, s, 20);
    CHECK(check_counters(g, s).empty());
    WalkState bad = s;
    bad.visits[2] += 1;
    CHECK_FALSE(check_counters(g, bad).empty());
    bad = s;
    bad.edge_traversals[0] += 1;
    CHECK_FALSE(check_counters(g, bad).empty());
}
