#ifndef DPATH_REDUCTION_HPP
#define DPATH_REDUCTION_HPP

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "dpath/digraph.hpp"
#include "dpath/gridtiling.hpp"

namespace dpath {

// Grid-of-grids gadget construction turning a Grid Tiling instance into an
// edge-disjoint paths instance on a planar DAG.
//
// Layout (all coordinates dyadic rationals):
//   grid vertex w_{i,j}^{q,l}   x = (i-1)(N+1) + q,  y = (j-1)(N+1) + l
//   split copies LB / TR        offset (-1/4,-1/4) / (+1/4,+1/4)
//   h_{i,j}^{i+1,j}(l)          x = i(N+1),          y as row l of G_{i,j}
//   v_{i,j}^{i,j+1}(l)          x as column l of G_{i,j}, y = j(N+1)
//   terminals and tree nodes    in the fan outside the grid block they
//                               serve; see fan_position in reduction.cpp

struct GadgetSize {
    int k = 0;
    int N = 0;
};

struct SizeCounts {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    bool operator==(const SizeCounts&) const = default;
};

struct ReductionOutput {
    EmbeddedDigraph graph;
    // (a_1,b_1) ... (a_k,b_k), (c_1,d_1) ... (c_k,d_k)
    TerminalSet terminals;
    GridTilingInstance provenance;
    SizeCounts counts;
    bool degree_reduced = false;
};

enum class Side { Le, Ri, To, Bo };
enum class Level { Horizontal, Vertical };

// G1: k^2 directed N x N grids, blue connectors with their matchings, and the
// four terminal families with their stars. Throws InvalidParameters unless
// k >= 1 and N >= 2.
EmbeddedDigraph build_g1(int k, int N);

// Reads (k, N) back from the grid labels of a gadget graph.
GadgetSize gadget_size(const EmbeddedDigraph& g);

// Splits every w_{i,j}^{q,l} with (q,l) not in S_{i,j} into LB -> TR.
// Throws Mismatch if g1 was built for other parameters.
EmbeddedDigraph split_vertices(const EmbeddedDigraph& g1, const GridTilingInstance& inst);

// G2 together with the 2k terminal pairs and the closed-form size counts.
ReductionOutput reduce(const GridTilingInstance& inst);

// Replaces every terminal star by a balanced directed binary tree so that all
// in- and out-degrees are at most 2. Throws AlreadyReduced on a second call.
ReductionOutput reduce_degree(const ReductionOutput& out);

// |V| = 4k + 2k(k-1)N + k^2 N^2 + sum (N^2 - |S_{i,j}|)
// |E| = 2k^2 N(N-1) + sum (N^2 - |S_{i,j}|) + 2k(k-1)(3N-1) + 4kN
SizeCounts predicted_counts(const GridTilingInstance& inst);
// Each of the 4k stars gains N-2 tree nodes and N-2 edges.
SizeCounts predicted_counts_degree_reduced(const GridTilingInstance& inst);
SizeCounts actual_counts(const EmbeddedDigraph& g);

// w_{i,j,LB}^{q,l} and w_{i,j,TR}^{q,l}; both equal the whole vertex when unsplit.
VertexId grid_lb(const EmbeddedDigraph& g, int i, int j, int q, int l);
VertexId grid_tr(const EmbeddedDigraph& g, int i, int j, int q, int l);

// The N boundary vertices of G_{i,j}^split in l order. Throws std::out_of_range
// for indices outside [k].
std::vector<VertexId> boundary(const EmbeddedDigraph& g2, int i, int j, Side side);

// Horizontal(index) or Vertical(index), sorted by vertex id. Tree nodes of a
// degree-reduced graph belong to the level of their terminal.
std::vector<VertexId> level_set(const EmbeddedDigraph& g2, Level kind, int index);

bool in_level(const VertexLabel& label, Level kind, int index);

nlohmann::json reduction_to_json(const ReductionOutput& out);
ReductionOutput reduction_from_json(const nlohmann::json& j);

} // namespace dpath

#endif
