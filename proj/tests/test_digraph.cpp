#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dpath/digraph.hpp"
#include "dpath/errors.hpp"
#include "dpath/reduction.hpp"
#include "oracles.hpp"

using namespace dpath;

namespace {

std::set<VertexId> as_set(const std::vector<VertexId>& v) { return {v.begin(), v.end()}; }

EmbeddedDigraph single_edge() {
    DigraphBuilder b;
    auto u = b.add_vertex(VertexLabel::plain(0));
    auto v = b.add_vertex(VertexLabel::plain(1));
    b.add_edge(u, v);
    return b.build();
}

EmbeddedDigraph square() {
    DigraphBuilder b;
    auto v0 = b.add_vertex(VertexLabel::plain(0), {0, 0});
    auto v1 = b.add_vertex(VertexLabel::plain(1), {1, 0});
    auto v2 = b.add_vertex(VertexLabel::plain(2), {1, 1});
    auto v3 = b.add_vertex(VertexLabel::plain(3), {0, 1});
    b.add_edge(v0, v1);
    b.add_edge(v1, v2);
    b.add_edge(v2, v3);
    b.add_edge(v3, v0);
    return b.build();
}

} // namespace

TEST_CASE("builder rejects malformed graphs") {
    DigraphBuilder b;
    auto u = b.add_vertex(VertexLabel::plain(0), {0, 0});
    auto v = b.add_vertex(VertexLabel::plain(1), {1, 0});
    CHECK_THROWS_AS(b.add_vertex(VertexLabel::plain(0), {5, 5}), InvalidParameters);
    CHECK_THROWS_AS(b.add_vertex(VertexLabel::plain(2), {1, 0}), InvalidParameters);
    CHECK_THROWS_AS(b.add_edge(u, u), InvalidParameters);
    b.add_edge(u, v);
    CHECK_THROWS_AS(b.add_edge(u, v), InvalidParameters);
    b.add_edge(v, u);
    b.remove_edge(u, v);
    CHECK_FALSE(b.has_edge(u, v));
    CHECK(b.build().num_edges() == 1);
}

TEST_CASE("topological_sort") {
    auto g = single_edge();
    auto topo = topological_sort(g);
    CHECK(topo.acyclic);
    CHECK(topo.order == std::vector<VertexId>{0, 1});

    DigraphBuilder b;
    auto u = b.add_vertex(VertexLabel::plain(0));
    auto v = b.add_vertex(VertexLabel::plain(1));
    b.add_edge(u, v);
    b.add_edge(v, u);
    auto cyc = topological_sort(b.build());
    CHECK_FALSE(cyc.acyclic);
    CHECK(cyc.cycle.size() == 3);
    CHECK(cyc.cycle.front() == cyc.cycle.back());

    auto g1 = build_g1(2, 2);
    auto order = topological_sort(g1);
    REQUIRE(order.acyclic);
    std::vector<std::size_t> pos(g1.num_vertices());
    for (std::size_t n = 0; n < order.order.size(); ++n) pos[order.order[n]] = n;
    for (const Edge& e : g1.edges()) CHECK(pos[e.tail] < pos[e.head]);
}

TEST_CASE("cycle witness is a real cycle") {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 30; ++round) {
        auto dag = oracle::random_dag(rng, 8, 0.4, 0);
        DigraphBuilder b = to_builder(dag.graph);
        if (dag.graph.num_edges() == 0) continue;
        const Edge e = dag.graph.edge(0);
        // Reversing an edge closes a 2-cycle.
        if (!b.has_edge(e.head, e.tail)) b.add_edge(e.head, e.tail);
        auto topo = topological_sort(b.build());
        REQUIRE_FALSE(topo.acyclic);
        auto g = b.build();
        REQUIRE(topo.cycle.size() >= 3);
        CHECK(topo.cycle.front() == topo.cycle.back());
        for (std::size_t n = 0; n + 1 < topo.cycle.size(); ++n) {
            CHECK(g.edge_between(topo.cycle[n], topo.cycle[n + 1]).has_value());
        }
    }
}

TEST_CASE("check_planar_embedding") {
    auto sq = check_planar_embedding(square());
    CHECK(sq.faces == 2);
    CHECK(sq.genus == 0);

    DigraphBuilder k5;
    for (int v = 0; v < 5; ++v) k5.add_vertex(VertexLabel::plain(v));
    for (VertexId u = 0; u < 5; ++u) {
        for (VertexId v = u + 1; v < 5; ++v) k5.add_edge(u, v);
    }
    CHECK(check_planar_embedding(k5.build()).genus >= 1);

    DigraphBuilder split;
    split.add_vertex(VertexLabel::plain(0));
    split.add_vertex(VertexLabel::plain(1));
    CHECK_THROWS_AS(check_planar_embedding(split.build()), NotConnected);

    auto out = reduce(generate_planted(2, 3, 0, 0));
    CHECK(check_planar_embedding(out.graph).genus == 0);
}

TEST_CASE("neighbourhoods") {
    auto g = single_edge();
    std::vector<VertexId> all{0, 1};
    CHECK(out_neighbors(g, all).empty());
    CHECK(in_neighbors(g, all).empty());
    std::vector<VertexId> u{0};
    CHECK(out_neighbors(g, u) == std::vector<VertexId>{1});
    CHECK(in_neighbors(g, u).empty());

    auto out = reduce(generate_planted(2, 2, 0, 0));
    auto vertical = level_set(out.graph, Level::Vertical, 1);
    std::set<VertexId> expected;
    for (int j = 1; j <= 2; ++j) {
        for (int l = 1; l <= 2; ++l) expected.insert(out.graph.at(VertexLabel::hblue(1, j, l)));
    }
    CHECK(as_set(out_neighbors(out.graph, vertical)) == expected);
}

TEST_CASE("neighbourhoods never meet their set") {
    auto out = reduce(generate_random(2, 3, 0.5, 9));
    std::mt19937_64 rng(1);
    std::bernoulli_distribution coin(0.3);
    for (int round = 0; round < 50; ++round) {
        std::vector<VertexId> s;
        for (VertexId v = 0; v < out.graph.num_vertices(); ++v) {
            if (coin(rng)) s.push_back(v);
        }
        const auto in_s = as_set(s);
        for (VertexId v : out_neighbors(out.graph, s)) CHECK_FALSE(in_s.count(v));
        for (VertexId v : in_neighbors(out.graph, s)) CHECK_FALSE(in_s.count(v));
    }
}

TEST_CASE("degree maxima") {
    CHECK(max_in_degree(EmbeddedDigraph{}) == 0);
    CHECK(max_out_degree(DigraphBuilder{}.build()) == 0);

    auto two = reduce(generate_random(2, 2, 0.5, 1));
    CHECK(max_out_degree(two.graph) == 2);
    auto three = reduce(generate_random(2, 3, 0.5, 1));
    CHECK(max_out_degree(three.graph) == 3);
    CHECK(three.graph.out_degree(three.graph.at(VertexLabel::terminal(TerminalFamily::A, 1))) == 3);
    CHECK(three.graph.out_degree(three.graph.at(VertexLabel::terminal(TerminalFamily::C, 2))) == 3);

    auto reduced = reduce_degree(three);
    CHECK(max_in_degree(reduced.graph) <= 2);
    CHECK(max_out_degree(reduced.graph) <= 2);
}

TEST_CASE("rotation matches the angular order and re-derivation is idempotent") {
    auto out = reduce_degree(reduce(generate_random(2, 3, 0.5, 4)));
    const auto& g = out.graph;
    CHECK(derive_rotation(g) == derive_rotation(g));
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        auto rot = g.rotation(v);
        std::vector<EdgeId> expected(g.out_edges(v).begin(), g.out_edges(v).end());
        expected.insert(expected.end(), g.in_edges(v).begin(), g.in_edges(v).end());
        std::vector<EdgeId> sorted(rot.begin(), rot.end());
        std::sort(sorted.begin(), sorted.end());
        std::sort(expected.begin(), expected.end());
        CHECK(sorted == expected);

        // atan2 as an independent angle oracle; the drawing has no collinear neighbours.
        auto angle = [&](EdgeId e) {
            const Edge& ed = g.edge(e);
            const Point& o = g.point(ed.tail == v ? ed.head : ed.tail);
            const double a = std::atan2(o.y - g.point(v).y, o.x - g.point(v).x);
            return a < 0 ? a + 2 * M_PI : a;
        };
        for (std::size_t n = 1; n < rot.size(); ++n) CHECK(angle(rot[n - 1]) < angle(rot[n]));
    }
    auto rebuilt = to_builder(g).build();
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        CHECK(std::vector<EdgeId>(rebuilt.rotation(v).begin(), rebuilt.rotation(v).end()) ==
              std::vector<EdgeId>(g.rotation(v).begin(), g.rotation(v).end()));
    }
}

TEST_CASE("graph JSON and DOT") {
    auto out = reduce_degree(reduce(generate_random(2, 2, 0.5, 2)));
    auto back = graph_from_json(graph_to_json(out.graph));
    REQUIRE(back.num_vertices() == out.graph.num_vertices());
    REQUIRE(back.num_edges() == out.graph.num_edges());
    for (VertexId v = 0; v < back.num_vertices(); ++v) {
        CHECK(back.label(v) == out.graph.label(v));
        CHECK(back.point(v) == out.graph.point(v));
    }
    CHECK(graph_to_json(back) == graph_to_json(out.graph));
    CHECK(to_dot(back) == to_dot(out.graph));

    for (const auto& label : {VertexLabel::grid(1, 2, 3, 1, GridPart::TR), VertexLabel::hblue(1, 1, 2),
                              VertexLabel::vblue(2, 1, 1), VertexLabel::terminal(TerminalFamily::D, 3),
                              VertexLabel::tree(TerminalFamily::B, 1, "LRL"), VertexLabel::plain(9)}) {
        CHECK(label_from_json(label_to_json(label)) == label);
    }

    const std::string dot = to_dot(reduce(generate_random(1, 2, 0.0, 0)).graph);
    CHECK(dot.find("style=dotted") != std::string::npos);
    CHECK(dot.find("pos=\"") != std::string::npos);
    CHECK(to_dot(build_g1(1, 2)).find("style=dotted") == std::string::npos);
    CHECK_THROWS_AS(graph_from_json(nlohmann::json{{"vertices", 3}}), ParseError);
}
