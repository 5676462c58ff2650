#include "dpath/mappers.hpp"

#include <set>

#include "dpath/errors.hpp"

namespace dpath {

namespace {

void append(Path& path, const Path& segment) {
    auto first = segment.begin();
    if (!path.empty() && first != segment.end() && *first == path.back()) ++first;
    path.insert(path.end(), first, segment.end());
}

void push_cell(const EmbeddedDigraph& g, Path& path, int i, int j, int q, int l) {
    if (auto whole = g.find(VertexLabel::grid(i, j, q, l))) {
        path.push_back(*whole);
        return;
    }
    path.push_back(g.at(VertexLabel::grid(i, j, q, l, GridPart::LB)));
    path.push_back(g.at(VertexLabel::grid(i, j, q, l, GridPart::TR)));
}

void check_indices(const EmbeddedDigraph& g, int i, int j, int l) {
    const GadgetSize size = gadget_size(g);
    if (i < 1 || j < 1 || i > size.k || j > size.k) throw std::out_of_range("grid index outside [k]");
    if (l < 1 || l > size.N) throw std::out_of_range("row/column index outside [N]");
}

// Terminal star edge, or the unique route through a degree-reduction tree.
Path terminal_hop(const EmbeddedDigraph& g, VertexId from, VertexId to) {
    Path path{from};
    auto walk = [&](auto&& self, VertexId v) -> bool {
        for (EdgeId e : g.out_edges(v)) {
            VertexId w = g.edge(e).head;
            if (w == to) {
                path.push_back(w);
                return true;
            }
            if (g.label(w).kind != LabelKind::TreeNode) continue;
            path.push_back(w);
            if (self(self, w)) return true;
            path.pop_back();
        }
        return false;
    };
    if (!walk(walk, from)) {
        throw InvalidSolution("no terminal route " + g.label(from).to_string() + " -> " + g.label(to).to_string());
    }
    return path;
}

} // namespace

Path row_path(const EmbeddedDigraph& g2, int i, int j, int l) {
    check_indices(g2, i, j, l);
    const int N = gadget_size(g2).N;
    Path path;
    for (int q = 1; q <= N; ++q) push_cell(g2, path, i, j, q, l);
    return path;
}

Path column_path(const EmbeddedDigraph& g2, int i, int j, int l) {
    check_indices(g2, i, j, l);
    const int N = gadget_size(g2).N;
    Path path;
    for (int r = 1; r <= N; ++r) push_cell(g2, path, i, j, l, r);
    return path;
}

PathSet gt_solution_to_paths(const ReductionOutput& out, const GTAssignment& asg) {
    const GridTilingInstance& inst = out.provenance;
    if (!check_gt_solution(inst, asg)) throw InvalidSolution("assignment does not solve the source instance");
    const EmbeddedDigraph& g = out.graph;
    const int k = inst.k;
    PathSet ps;

    for (int i = 1; i <= k; ++i) {
        const auto [a, b] = out.terminals.pairs.at(i - 1);
        Path path;
        append(path, terminal_hop(g, a, grid_lb(g, i, 1, asg.at(i, 1).a, 1)));
        for (int j = 1; j <= k; ++j) {
            const int alpha = asg.at(i, j).a;
            append(path, column_path(g, i, j, alpha));
            if (j < k) {
                for (int l = alpha; l <= asg.at(i, j + 1).a; ++l) path.push_back(g.at(VertexLabel::vblue(i, j, l)));
            }
        }
        append(path, terminal_hop(g, path.back(), b));
        ps.paths.push_back(std::move(path));
    }
    for (int j = 1; j <= k; ++j) {
        const auto [c, d] = out.terminals.pairs.at(k + j - 1);
        Path path;
        append(path, terminal_hop(g, c, grid_lb(g, 1, j, 1, asg.at(1, j).b)));
        for (int i = 1; i <= k; ++i) {
            const int beta = asg.at(i, j).b;
            append(path, row_path(g, i, j, beta));
            if (i < k) {
                for (int l = beta; l <= asg.at(i + 1, j).b; ++l) path.push_back(g.at(VertexLabel::hblue(i, j, l)));
            }
        }
        append(path, terminal_hop(g, path.back(), d));
        ps.paths.push_back(std::move(path));
    }
    return ps;
}

GTAssignment paths_to_gt_solution(const ReductionOutput& out, const PathSet& ps) {
    if (auto check = check_edp_solution(out.graph, out.terminals, ps); !check) {
        throw InvalidSolution("not an edge-disjoint paths solution: " + check.violations.front());
    }
    const int k = out.provenance.k;
    const EmbeddedDigraph& g = out.graph;
    GTAssignment asg(k);
    for (int j = 1; j <= k; ++j) {
        const Path& q_path = ps.paths.at(k + j - 1);
        const std::set<VertexId> on_q(q_path.begin(), q_path.end());
        for (int i = 1; i <= k; ++i) {
            bool found = false;
            for (VertexId v : ps.paths.at(i - 1)) {
                const auto& lab = g.label(v);
                if (lab.is_grid() && lab.part == GridPart::Whole && lab.i == i && lab.j == j && on_q.count(v)) {
                    asg.at(i, j) = GridPair{lab.q, lab.l};
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw ExtractionFailed("paths P_" + std::to_string(i) + " and Q_" + std::to_string(j) +
                                       " share no whole vertex in grid (" + std::to_string(i) + "," +
                                       std::to_string(j) + ")");
            }
        }
    }
    return asg;
}

bool check_level_confinement(const ReductionOutput& out, const PathSet& ps) {
    const int k = out.provenance.k;
    if (ps.paths.size() != static_cast<std::size_t>(2 * k)) return false;
    for (std::size_t p = 0; p < ps.paths.size(); ++p) {
        const bool vertical = p < static_cast<std::size_t>(k);
        const Level kind = vertical ? Level::Vertical : Level::Horizontal;
        const int index = static_cast<int>(vertical ? p + 1 : p - k + 1);
        const Path& path = ps.paths[p];
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            if (!in_level(out.graph.label(path[s]), kind, index)) return false;
            if (!in_level(out.graph.label(path[s + 1]), kind, index)) return false;
        }
    }
    return true;
}

} // namespace dpath
