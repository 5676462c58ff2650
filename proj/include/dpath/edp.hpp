#ifndef DPATH_EDP_HPP
#define DPATH_EDP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpath/digraph.hpp"

namespace dpath {

// Vertex sequence v0 ... vm; m = 0 is the zero-edge path that stays put.
using Path = std::vector<VertexId>;

// One path per terminal pair, index-aligned with the TerminalSet.
struct PathSet {
    std::vector<Path> paths;
    bool operator==(const PathSet&) const = default;
};

struct PathCheck {
    bool ok = true;
    std::vector<std::string> violations;
    explicit operator bool() const { return ok; }
};

// Valid directed paths with the right endpoints, no edge repeated within a
// path, and no edge shared between two paths. Vertices may be shared.
PathCheck check_edp_solution(const EmbeddedDigraph& g, const TerminalSet& terminals, const PathSet& ps);

// As above, but an internal vertex of one path may not appear on any other.
PathCheck check_vdp_solution(const EmbeddedDigraph& g, const TerminalSet& terminals, const PathSet& ps);

struct EdpSolveOptions {
    std::uint64_t budget = 10'000'000;
};

struct EdpStats {
    std::uint64_t expansions = 0;
    std::uint64_t memo_hits = 0;
};

// Exact edge-disjoint paths on a DAG. Pairs are routed one at a time in the
// given order by depth-first search over the residual edges, backtracking over
// path choices. Before each pair the residual graph is pruned to edges that
// lie on some source-to-sink route of a pair still to be routed; a pair with
// no such route fails the branch immediately, and residual states already
// shown infeasible are remembered.
//
// Returns nullopt iff no solution exists. Throws InvalidParameters if `g` has a
// cycle and BudgetExceeded once `budget` edge extensions have been tried.
std::optional<PathSet> solve_edp_dag(const EmbeddedDigraph& g, const TerminalSet& terminals,
                                     EdpSolveOptions opts = {}, EdpStats* stats = nullptr);

// Directed line graph with per-pair apexes. Vertex `edge_vertex[e]` of `graph`
// stands for edge e of the original graph; edge vertices e -> f are adjacent
// when head(e) = tail(f). Each pair gets a fresh source apex feeding every
// edge leaving its source and a fresh sink apex fed by every edge entering its
// sink. A pair whose source equals its sink keeps an apex-to-apex edge.
struct VdpInstance {
    EmbeddedDigraph graph;
    TerminalSet terminals;
    TerminalSet original_terminals;
    std::vector<VertexId> edge_vertex;           // original edge -> vertex
    std::vector<std::optional<EdgeId>> original;  // vertex -> original edge
};

VdpInstance edp_to_vdp_dag(const EmbeddedDigraph& g, const TerminalSet& terminals);

// Moves an edge-disjoint solution on g to a vertex-disjoint one on the line
// graph, and back.
PathSet edp_paths_to_vdp(const EmbeddedDigraph& g, const VdpInstance& vdp, const PathSet& ps);
PathSet vdp_paths_to_edp(const EmbeddedDigraph& g, const VdpInstance& vdp, const PathSet& ps);

// Vertex-disjoint paths on a DAG by a pebbling search: the pebble furthest
// behind in topological order always moves next, so vertices left behind can
// never be revisited and the pebble positions alone are the search state.
// Independent of solve_edp_dag. Throws BudgetExceeded like the EDP solver.
std::optional<PathSet> solve_vdp_dag(const EmbeddedDigraph& g, const TerminalSet& terminals,
                                     EdpSolveOptions opts = {});

// Budget from the DPATH_BUDGET environment variable, or the default.
std::uint64_t budget_from_env(std::uint64_t fallback = 10'000'000);

nlohmann::json pathset_to_json(const EmbeddedDigraph& g, const PathSet& ps);
PathSet pathset_from_json(const EmbeddedDigraph& g, const nlohmann::json& j);

} // namespace dpath

#endif
