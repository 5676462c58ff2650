#include "dpath/reduction.hpp"

#include <algorithm>
#include <functional>

#include "dpath/errors.hpp"

namespace dpath {

namespace {

double grid_x(int N, int i, int q) { return (i - 1) * (N + 1) + q; }
double grid_y(int N, int j, int l) { return (j - 1) * (N + 1) + l; }

int ceil_log2(int n) {
    int h = 0;
    while ((1 << h) < n) ++h;
    return h;
}

// A terminal star fans out from one side of a row or column of N boundary
// vertices. Its leaves sit at `axis(l)` along the row/column; the fan lies on
// the `outward` side of the line `baseline`.
struct Fan {
    TerminalFamily family;
    int index;
    bool source;       // edges point away from the terminal
    bool along_x;      // leaves spread along the x axis
    double baseline;   // grid line coordinate of the leaves
    double outward;    // -1 below/left, +1 above/right
    std::function<double(int)> axis;
    std::function<VertexLabel(int)> leaf;  // unsplit label of the l-th leaf
};

// Tree node covering leaves [lo, hi] (hi > lo): it sits in the gap right after
// the left half, half a unit plus a quarter per extra level away from the
// leaf line. Subtrees then occupy disjoint strips and never cross.
Point fan_position(const Fan& fan, int lo, int hi) {
    const int size = hi - lo + 1;
    const int last_left = lo + (size + 1) / 2 - 1;
    const double along = fan.axis(last_left) + 0.5;
    const double depth = fan.baseline + fan.outward * (0.5 + 0.25 * (ceil_log2(size) - 1));
    return fan.along_x ? Point{along, depth} : Point{depth, along};
}

std::vector<Fan> terminal_fans(int k, int N) {
    std::vector<Fan> fans;
    for (int i = 1; i <= k; ++i) {
        fans.push_back(Fan{TerminalFamily::A, i, true, true, grid_y(N, 1, 1), -1.0,
                           [=](int l) { return grid_x(N, i, l); },
                           [=](int l) { return VertexLabel::grid(i, 1, l, 1); }});
        fans.push_back(Fan{TerminalFamily::B, i, false, true, grid_y(N, k, N), +1.0,
                           [=](int l) { return grid_x(N, i, l); },
                           [=](int l) { return VertexLabel::grid(i, k, l, N); }});
    }
    for (int j = 1; j <= k; ++j) {
        fans.push_back(Fan{TerminalFamily::C, j, true, false, grid_x(N, 1, 1), -1.0,
                           [=](int l) { return grid_y(N, j, l); },
                           [=](int l) { return VertexLabel::grid(1, j, 1, l); }});
        fans.push_back(Fan{TerminalFamily::D, j, false, false, grid_x(N, k, N), +1.0,
                           [=](int l) { return grid_y(N, j, l); },
                           [=](int l) { return VertexLabel::grid(k, j, N, l); }});
    }
    return fans;
}

void check_params(int k, int N) {
    if (k < 1) throw InvalidParameters("k must be at least 1");
    if (N < 2) throw InvalidParameters("N must be at least 2");
}

std::size_t split_count(const GridTilingInstance& inst) {
    std::size_t n = 0;
    const auto full = static_cast<std::size_t>(inst.N) * inst.N;
    for (int y = 1; y <= inst.k; ++y) {
        for (int x = 1; x <= inst.k; ++x) n += full - inst.at(x, y).size();
    }
    return n;
}

} // namespace

EmbeddedDigraph build_g1(int k, int N) {
    check_params(k, N);
    DigraphBuilder b;
    auto w = [](int i, int j, int q, int l) { return VertexLabel::grid(i, j, q, l); };

    for (int j = 1; j <= k; ++j) {
        for (int i = 1; i <= k; ++i) {
            for (int l = 1; l <= N; ++l) {
                for (int q = 1; q <= N; ++q) b.add_vertex(w(i, j, q, l), {grid_x(N, i, q), grid_y(N, j, l)});
            }
        }
    }
    for (int j = 1; j <= k; ++j) {
        for (int i = 1; i < k; ++i) {
            for (int l = 1; l <= N; ++l) {
                b.add_vertex(VertexLabel::hblue(i, j, l), {static_cast<double>(i * (N + 1)), grid_y(N, j, l)});
            }
        }
    }
    for (int j = 1; j < k; ++j) {
        for (int i = 1; i <= k; ++i) {
            for (int l = 1; l <= N; ++l) {
                b.add_vertex(VertexLabel::vblue(i, j, l), {grid_x(N, i, l), static_cast<double>(j * (N + 1))});
            }
        }
    }
    const auto fans = terminal_fans(k, N);
    for (const auto& fan : fans) {
        b.add_vertex(VertexLabel::terminal(fan.family, fan.index), fan_position(fan, 1, N));
    }

    // Grid edges point right and up.
    for (int j = 1; j <= k; ++j) {
        for (int i = 1; i <= k; ++i) {
            for (int l = 1; l <= N; ++l) {
                for (int q = 1; q <= N; ++q) {
                    if (q < N) b.add_edge(b.at(w(i, j, q, l)), b.at(w(i, j, q + 1, l)));
                    if (l < N) b.add_edge(b.at(w(i, j, q, l)), b.at(w(i, j, q, l + 1)));
                }
            }
        }
    }
    // Horizontal connectors: Ri(G_{i,j}) -> H -> Le(G_{i+1,j}) plus the path along H.
    for (int j = 1; j <= k; ++j) {
        for (int i = 1; i < k; ++i) {
            for (int l = 1; l <= N; ++l) {
                VertexId h = b.at(VertexLabel::hblue(i, j, l));
                b.add_edge(b.at(w(i, j, N, l)), h);
                b.add_edge(h, b.at(w(i + 1, j, 1, l)));
                if (l < N) b.add_edge(h, b.at(VertexLabel::hblue(i, j, l + 1)));
            }
        }
    }
    // Vertical connectors: To(G_{i,j}) -> V -> Bo(G_{i,j+1}) plus the path along V.
    for (int j = 1; j < k; ++j) {
        for (int i = 1; i <= k; ++i) {
            for (int l = 1; l <= N; ++l) {
                VertexId v = b.at(VertexLabel::vblue(i, j, l));
                b.add_edge(b.at(w(i, j, l, N)), v);
                b.add_edge(v, b.at(w(i, j + 1, l, 1)));
                if (l < N) b.add_edge(v, b.at(VertexLabel::vblue(i, j, l + 1)));
            }
        }
    }
    for (const auto& fan : fans) {
        VertexId t = b.at(VertexLabel::terminal(fan.family, fan.index));
        for (int l = 1; l <= N; ++l) {
            VertexId leaf = b.at(fan.leaf(l));
            if (fan.source) {
                b.add_edge(t, leaf);
            } else {
                b.add_edge(leaf, t);
            }
        }
    }
    return b.build();
}

GadgetSize gadget_size(const EmbeddedDigraph& g) {
    GadgetSize size;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto& lab = g.label(v);
        if (!lab.is_grid()) continue;
        size.k = std::max(size.k, lab.i);
        size.N = std::max(size.N, lab.q);
    }
    if (size.k < 1 || size.N < 1) throw InvalidParameters("graph has no grid vertices");
    return size;
}

EmbeddedDigraph split_vertices(const EmbeddedDigraph& g1, const GridTilingInstance& inst) {
    const GadgetSize size = gadget_size(g1);
    if (size.k != inst.k || size.N != inst.N) {
        throw Mismatch("graph built for k=" + std::to_string(size.k) + ", N=" + std::to_string(size.N) +
                       " but instance has k=" + std::to_string(inst.k) + ", N=" + std::to_string(inst.N));
    }
    DigraphBuilder b;
    // For each original vertex: its id for incoming edges and for outgoing edges.
    std::vector<VertexId> entry(g1.num_vertices());
    std::vector<VertexId> exit(g1.num_vertices());
    std::vector<std::pair<VertexId, VertexId>> dotted;
    for (VertexId v = 0; v < g1.num_vertices(); ++v) {
        const auto& lab = g1.label(v);
        const Point p = g1.point(v);
        if (lab.is_grid() && lab.part != GridPart::Whole) throw Mismatch("graph is already split");
        if (lab.is_grid() && !inst.contains(lab.i, lab.j, GridPair{lab.q, lab.l})) {
            VertexId lb = b.add_vertex(VertexLabel::grid(lab.i, lab.j, lab.q, lab.l, GridPart::LB),
                                       {p.x - 0.25, p.y - 0.25});
            VertexId tr = b.add_vertex(VertexLabel::grid(lab.i, lab.j, lab.q, lab.l, GridPart::TR),
                                       {p.x + 0.25, p.y + 0.25});
            entry[v] = lb;
            exit[v] = tr;
            dotted.emplace_back(lb, tr);
        } else {
            entry[v] = exit[v] = b.add_vertex(lab, p);
        }
    }
    // In-edges of a grid vertex come from its left/bottom neighbours and go to
    // LB; out-edges go right/up and leave from TR.
    for (const auto& e : g1.edges()) b.add_edge(exit[e.tail], entry[e.head]);
    for (const auto& [lb, tr] : dotted) b.add_edge(lb, tr);
    return b.build();
}

SizeCounts predicted_counts(const GridTilingInstance& inst) {
    const std::size_t k = inst.k;
    const std::size_t N = inst.N;
    const std::size_t splits = split_count(inst);
    SizeCounts c;
    c.vertices = 4 * k + 2 * k * (k - 1) * N + k * k * N * N + splits;
    c.edges = 2 * k * k * N * (N - 1) + splits + 2 * k * (k - 1) * (3 * N - 1) + 4 * k * N;
    return c;
}

SizeCounts predicted_counts_degree_reduced(const GridTilingInstance& inst) {
    SizeCounts c = predicted_counts(inst);
    const std::size_t extra = 4 * static_cast<std::size_t>(inst.k) * (inst.N - 2);
    c.vertices += extra;
    c.edges += extra;
    return c;
}

SizeCounts actual_counts(const EmbeddedDigraph& g) {
    return SizeCounts{g.num_vertices(), g.num_edges()};
}

ReductionOutput reduce(const GridTilingInstance& inst) {
    if (auto v = validate_instance(inst); !v.empty()) throw InvalidParameters(v.front().message);
    ReductionOutput out;
    out.graph = split_vertices(build_g1(inst.k, inst.N), inst);
    for (int i = 1; i <= inst.k; ++i) {
        out.terminals.pairs.push_back({out.graph.at(VertexLabel::terminal(TerminalFamily::A, i)),
                                       out.graph.at(VertexLabel::terminal(TerminalFamily::B, i))});
    }
    for (int j = 1; j <= inst.k; ++j) {
        out.terminals.pairs.push_back({out.graph.at(VertexLabel::terminal(TerminalFamily::C, j)),
                                       out.graph.at(VertexLabel::terminal(TerminalFamily::D, j))});
    }
    out.provenance = inst;
    out.counts = predicted_counts(inst);
    return out;
}

ReductionOutput reduce_degree(const ReductionOutput& out) {
    if (out.degree_reduced) throw AlreadyReduced("degree reduction was already applied");
    const GadgetSize size = gadget_size(out.graph);
    const int N = size.N;
    DigraphBuilder b = to_builder(out.graph);

    for (const auto& fan : terminal_fans(size.k, N)) {
        const VertexId root = b.at(VertexLabel::terminal(fan.family, fan.index));
        std::vector<VertexId> leaves;
        for (int l = 1; l <= N; ++l) {
            VertexLabel lab = fan.leaf(l);
            if (auto whole = b.find(lab)) {
                leaves.push_back(*whole);
            } else {
                lab.part = fan.source ? GridPart::LB : GridPart::TR;
                leaves.push_back(b.at(lab));
            }
        }
        for (VertexId leaf : leaves) {
            if (fan.source) {
                b.remove_edge(root, leaf);
            } else {
                b.remove_edge(leaf, root);
            }
        }
        auto connect = [&](VertexId parent, VertexId child) {
            if (fan.source) {
                b.add_edge(parent, child);
            } else {
                b.add_edge(child, parent);
            }
        };
        std::function<VertexId(int, int, const std::string&)> attach = [&](int lo, int hi,
                                                                             const std::string& path) {
            if (lo == hi) return leaves[lo - 1];
            VertexId node = path.empty()
                                ? root
                                : b.add_vertex(VertexLabel::tree(fan.family, fan.index, path),
                                               fan_position(fan, lo, hi));
            const int mid = lo + (hi - lo + 1 + 1) / 2 - 1;
            connect(node, attach(lo, mid, path + "L"));
            connect(node, attach(mid + 1, hi, path + "R"));
            return node;
        };
        attach(1, N, "");
    }

    ReductionOutput reduced;
    reduced.graph = b.build();
    reduced.terminals = out.terminals;
    reduced.provenance = out.provenance;
    reduced.counts = predicted_counts_degree_reduced(out.provenance);
    reduced.degree_reduced = true;
    return reduced;
}

VertexId grid_lb(const EmbeddedDigraph& g, int i, int j, int q, int l) {
    if (auto whole = g.find(VertexLabel::grid(i, j, q, l))) return *whole;
    return g.at(VertexLabel::grid(i, j, q, l, GridPart::LB));
}

VertexId grid_tr(const EmbeddedDigraph& g, int i, int j, int q, int l) {
    if (auto whole = g.find(VertexLabel::grid(i, j, q, l))) return *whole;
    return g.at(VertexLabel::grid(i, j, q, l, GridPart::TR));
}

std::vector<VertexId> boundary(const EmbeddedDigraph& g2, int i, int j, Side side) {
    const GadgetSize size = gadget_size(g2);
    if (i < 1 || j < 1 || i > size.k || j > size.k) throw std::out_of_range("grid index outside [k]");
    const int N = size.N;
    std::vector<VertexId> out;
    for (int l = 1; l <= N; ++l) {
        switch (side) {
        case Side::Le: out.push_back(grid_lb(g2, i, j, 1, l)); break;
        case Side::Ri: out.push_back(grid_tr(g2, i, j, N, l)); break;
        case Side::To: out.push_back(grid_tr(g2, i, j, l, N)); break;
        case Side::Bo: out.push_back(grid_lb(g2, i, j, l, 1)); break;
        }
    }
    return out;
}

bool in_level(const VertexLabel& lab, Level kind, int index) {
    const bool vertical = kind == Level::Vertical;
    switch (lab.kind) {
    case LabelKind::Grid:
        return (vertical ? lab.i : lab.j) == index;
    case LabelKind::HBlue:
        return !vertical && lab.j == index;
    case LabelKind::VBlue:
        return vertical && lab.i == index;
    case LabelKind::Terminal:
    case LabelKind::TreeNode: {
        const bool ab = lab.family == TerminalFamily::A || lab.family == TerminalFamily::B;
        return ab == vertical && lab.index == index;
    }
    case LabelKind::Plain:
        return false;
    }
    return false;
}

std::vector<VertexId> level_set(const EmbeddedDigraph& g2, Level kind, int index) {
    const GadgetSize size = gadget_size(g2);
    if (index < 1 || index > size.k) throw std::out_of_range("level index outside [k]");
    std::vector<VertexId> out;
    for (VertexId v = 0; v < g2.num_vertices(); ++v) {
        if (in_level(g2.label(v), kind, index)) out.push_back(v);
    }
    return out;
}

nlohmann::json reduction_to_json(const ReductionOutput& out) {
    nlohmann::json terminals = nlohmann::json::array();
    for (const auto& p : out.terminals.pairs) terminals.push_back({p.source, p.sink});
    return {{"graph", graph_to_json(out.graph)},
            {"terminals", std::move(terminals)},
            {"provenance", instance_to_json(out.provenance)},
            {"counts", {{"vertices", out.counts.vertices}, {"edges", out.counts.edges}}},
            {"degree_reduced", out.degree_reduced}};
}

ReductionOutput reduction_from_json(const nlohmann::json& j) {
    try {
        ReductionOutput out;
        out.graph = graph_from_json(j.at("graph"));
        for (const auto& p : j.at("terminals")) {
            if (!p.is_array() || p.size() != 2) throw ParseError("terminal pairs must be [source, sink]");
            TerminalPair tp{p[0].get<VertexId>(), p[1].get<VertexId>()};
            if (tp.source >= out.graph.num_vertices() || tp.sink >= out.graph.num_vertices()) {
                throw ParseError("terminal vertex out of range");
            }
            out.terminals.pairs.push_back(tp);
        }
        out.provenance = instance_from_json(j.at("provenance"));
        out.counts.vertices = j.at("counts").at("vertices").get<std::size_t>();
        out.counts.edges = j.at("counts").at("edges").get<std::size_t>();
        out.degree_reduced = j.at("degree_reduced").get<bool>();
        return out;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed reduction output: ") + ex.what());
    }
}

} // namespace dpath
