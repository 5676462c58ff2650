#include <doctest.h>

#include <random>

#include "dpath/edp.hpp"
#include "dpath/errors.hpp"
#include "dpath/reduction.hpp"
#include "oracles.hpp"

using namespace dpath;

namespace {

// s0 -> x -> t0 and s1 -> x -> t1: the paths meet only at x.
struct Bowtie {
    EmbeddedDigraph g;
    TerminalSet t;
};

Bowtie bowtie() {
    DigraphBuilder b;
    auto s0 = b.add_vertex(VertexLabel::plain(0), {0, 0});
    auto s1 = b.add_vertex(VertexLabel::plain(1), {0, 2});
    auto x = b.add_vertex(VertexLabel::plain(2), {1, 1});
    auto t0 = b.add_vertex(VertexLabel::plain(3), {2, 2});
    auto t1 = b.add_vertex(VertexLabel::plain(4), {2, 0});
    b.add_edge(s0, x);
    b.add_edge(s1, x);
    b.add_edge(x, t0);
    b.add_edge(x, t1);
    return {b.build(), {{{s0, t0}, {s1, t1}}}};
}

// Both pairs must use the single edge u -> v.
Bowtie bridge() {
    DigraphBuilder b;
    auto s0 = b.add_vertex(VertexLabel::plain(0), {0, 0});
    auto s1 = b.add_vertex(VertexLabel::plain(1), {0, 2});
    auto u = b.add_vertex(VertexLabel::plain(2), {1, 1});
    auto v = b.add_vertex(VertexLabel::plain(3), {2, 1});
    auto t0 = b.add_vertex(VertexLabel::plain(4), {3, 2});
    auto t1 = b.add_vertex(VertexLabel::plain(5), {3, 0});
    b.add_edge(s0, u);
    b.add_edge(s1, u);
    b.add_edge(u, v);
    b.add_edge(v, t0);
    b.add_edge(v, t1);
    return {b.build(), {{{s0, t0}, {s1, t1}}}};
}

// k rightward corridors of length 3, with distractor edges down to the row below.
Bowtie corridors(int k) {
    DigraphBuilder b;
    TerminalSet t;
    for (int r = 0; r < k; ++r) {
        VertexId prev = b.add_vertex(VertexLabel::plain(r * 4), {0, double(r)});
        const VertexId first = prev;
        for (int c = 1; c < 4; ++c) {
            VertexId next = b.add_vertex(VertexLabel::plain(r * 4 + c), {double(c), double(r)});
            b.add_edge(prev, next);
            if (r > 0 && c < 3) b.add_edge(next, next - 4);
            prev = next;
        }
        t.pairs.push_back({first, prev});
    }
    return {b.build(), t};
}

} // namespace

TEST_CASE("check_edp_solution") {
    auto [g, t] = bowtie();
    PathSet ok{{{0, 2, 3}, {1, 2, 4}}};
    CHECK(check_edp_solution(g, t, ok));

    DigraphBuilder b;
    auto s = b.add_vertex(VertexLabel::plain(0));
    auto u = b.add_vertex(VertexLabel::plain(1));
    auto v = b.add_vertex(VertexLabel::plain(2));
    b.add_edge(s, u);
    b.add_edge(u, v);
    auto line = b.build();
    TerminalSet twice{{{s, v}, {u, v}}};
    auto shared = check_edp_solution(line, twice, PathSet{{{0, 1, 2}, {1, 2}}});
    CHECK_FALSE(shared);
    REQUIRE(shared.violations.size() == 1);
    CHECK(shared.violations[0].find("p1 -> p2") != std::string::npos);

    CHECK_FALSE(check_edp_solution(g, t, PathSet{{{0, 2, 4}, {1, 2, 4}}}));
    CHECK_FALSE(check_edp_solution(g, t, PathSet{{{0, 3}, {1, 2, 4}}}));
    CHECK_FALSE(check_edp_solution(g, t, PathSet{{{0, 2, 3}}}));

    TerminalSet stay{{{s, s}}};
    CHECK(check_edp_solution(line, stay, PathSet{{{s}}}));
}

TEST_CASE("check_vdp_solution") {
    auto [g, t] = bowtie();
    CHECK_FALSE(check_vdp_solution(g, t, PathSet{{{0, 2, 3}, {1, 2, 4}}}));
    auto [c, ct] = corridors(2);
    PathSet straight{{{0, 1, 2, 3}, {4, 5, 6, 7}}};
    CHECK(check_vdp_solution(c, ct, straight));
    CHECK(check_edp_solution(c, ct, straight));
}

TEST_CASE("solve_edp_dag small cases") {
    auto [c, ct] = corridors(3);
    auto sol = solve_edp_dag(c, ct);
    REQUIRE(sol);
    CHECK(check_edp_solution(c, ct, *sol));

    auto [b, bt] = bridge();
    CHECK_FALSE(solve_edp_dag(b, bt).has_value());
    TerminalSet one{{bt.pairs[0]}};
    CHECK(solve_edp_dag(b, one).has_value());

    auto [w, wt] = bowtie();
    CHECK(solve_edp_dag(w, wt).has_value());

    DigraphBuilder cyc;
    cyc.add_vertex(VertexLabel::plain(0));
    cyc.add_vertex(VertexLabel::plain(1));
    cyc.add_edge(0, 1);
    cyc.add_edge(1, 0);
    CHECK_THROWS_AS(solve_edp_dag(cyc.build(), TerminalSet{{{0, 1}}}), InvalidParameters);
}

TEST_CASE("solve_edp_dag on reductions") {
    auto planted = reduce(generate_planted(2, 3, 0, 0));
    auto sol = solve_edp_dag(planted.graph, planted.terminals);
    REQUIRE(sol);
    CHECK(check_edp_solution(planted.graph, planted.terminals, *sol));

    auto empty = reduce(generate_random(2, 3, 0.0, 0));
    CHECK_FALSE(solve_edp_dag(empty.graph, empty.terminals).has_value());

    auto hard = reduce(generate_random(3, 4, 0.3, 4));
    CHECK_THROWS_AS(solve_edp_dag(hard.graph, hard.terminals, EdpSolveOptions{5}), BudgetExceeded);
}

TEST_CASE("solver matches exhaustive enumeration on random DAGs") {
    std::mt19937_64 rng(77);
    int feasible = 0;
    const int rounds = 300;
    for (int round = 0; round < rounds; ++round) {
        const int n = 4 + round % 9;
        const int pairs = 1 + round % 3;
        auto dag = oracle::random_dag(rng, n, 0.35, pairs);
        auto sol = solve_edp_dag(dag.graph, dag.terminals);
        CAPTURE(round);
        CHECK(sol.has_value() == oracle::edp_feasible(dag.graph, dag.terminals));
        if (sol) {
            CHECK(check_edp_solution(dag.graph, dag.terminals, *sol));
            ++feasible;
        }
    }
    CHECK(feasible > rounds / 10);
    CHECK(feasible < rounds - rounds / 10);
}

TEST_CASE("solver is deterministic") {
    auto out = reduce(generate_random(2, 3, 0.6, 3));
    EdpStats a;
    EdpStats b;
    auto first = solve_edp_dag(out.graph, out.terminals, {}, &a);
    auto second = solve_edp_dag(out.graph, out.terminals, {}, &b);
    CHECK(first == second);
    CHECK(a.expansions == b.expansions);
}

TEST_CASE("edp_to_vdp_dag") {
    DigraphBuilder b;
    auto u = b.add_vertex(VertexLabel::plain(0));
    auto v = b.add_vertex(VertexLabel::plain(1));
    auto w = b.add_vertex(VertexLabel::plain(2));
    b.add_edge(u, v);
    b.add_edge(v, w);
    auto path = b.build();
    TerminalSet t{{{u, w}}};
    auto vdp = edp_to_vdp_dag(path, t);
    CHECK(vdp.graph.num_vertices() == 4);
    CHECK(vdp.graph.num_edges() == 3);
    auto sol = solve_vdp_dag(vdp.graph, vdp.terminals);
    REQUIRE(sol);
    CHECK(sol->paths[0].size() == 4);

    auto [g, gt] = bridge();
    auto cut = edp_to_vdp_dag(g, gt);
    const VertexId uv = cut.edge_vertex[*g.edge_between(2, 3)];
    // Every apex-to-apex route runs through the vertex of the bridge edge.
    for (const auto& tp : cut.terminals.pairs) {
        std::vector<EdgeId> stack;
        std::vector<std::vector<EdgeId>> routes;
        oracle::all_paths(cut.graph, tp.source, tp.sink, stack, routes);
        REQUIRE_FALSE(routes.empty());
        for (const auto& r : routes) {
            bool through = false;
            for (EdgeId e : r) through = through || cut.graph.edge(e).head == uv;
            CHECK(through);
        }
    }
    CHECK_FALSE(solve_vdp_dag(cut.graph, cut.terminals).has_value());
}

TEST_CASE("transform round trip and cross-oracle agreement") {
    std::mt19937_64 rng(5);
    int feasible = 0;
    for (int round = 0; round < 50; ++round) {
        auto dag = oracle::random_dag(rng, 6 + round % 7, 0.4, 2);
        auto edp = solve_edp_dag(dag.graph, dag.terminals);
        auto vdp = edp_to_vdp_dag(dag.graph, dag.terminals);
        auto vsol = solve_vdp_dag(vdp.graph, vdp.terminals);
        CAPTURE(round);
        CHECK(edp.has_value() == vsol.has_value());
        if (edp) {
            ++feasible;
            auto moved = edp_paths_to_vdp(dag.graph, vdp, *edp);
            CHECK(check_vdp_solution(vdp.graph, vdp.terminals, moved));
            CHECK(vdp_paths_to_edp(dag.graph, vdp, moved) == *edp);
        }
        if (vsol) {
            CHECK(check_vdp_solution(vdp.graph, vdp.terminals, *vsol));
            CHECK(check_edp_solution(dag.graph, dag.terminals, vdp_paths_to_edp(dag.graph, vdp, *vsol)));
        }
    }
    CHECK(feasible > 0);
}

TEST_CASE("zero-edge paths") {
    DigraphBuilder b;
    auto u = b.add_vertex(VertexLabel::plain(0));
    auto v = b.add_vertex(VertexLabel::plain(1));
    b.add_edge(u, v);
    auto g = b.build();
    TerminalSet t{{{u, u}, {u, v}}};
    auto sol = solve_edp_dag(g, t);
    REQUIRE(sol);
    CHECK(sol->paths[0] == Path{u});
    auto vdp = edp_to_vdp_dag(g, t);
    auto vsol = solve_vdp_dag(vdp.graph, vdp.terminals);
    REQUIRE(vsol);
    CHECK(vdp_paths_to_edp(g, vdp, *vsol) == *sol);
}

TEST_CASE("pathset JSON and budget variable") {
    auto out = reduce(generate_planted(1, 2, 0, 0));
    auto sol = solve_edp_dag(out.graph, out.terminals);
    REQUIRE(sol);
    CHECK(pathset_from_json(out.graph, pathset_to_json(out.graph, *sol)) == *sol);

    ::setenv("DPATH_BUDGET", "1234", 1);
    CHECK(budget_from_env() == 1234);
    ::unsetenv("DPATH_BUDGET");
    CHECK(budget_from_env(99) == 99);
}
