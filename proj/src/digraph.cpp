#include "dpath/digraph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <queue>
#include <sstream>

#include "dpath/errors.hpp"

namespace dpath {

namespace {

const char* part_name(GridPart part) {
    switch (part) {
    case GridPart::Whole: return "whole";
    case GridPart::LB: return "LB";
    case GridPart::TR: return "TR";
    }
    return "?";
}

char family_char(TerminalFamily family) {
    switch (family) {
    case TerminalFamily::A: return 'a';
    case TerminalFamily::B: return 'b';
    case TerminalFamily::C: return 'c';
    case TerminalFamily::D: return 'd';
    }
    return '?';
}

TerminalFamily family_from(const std::string& s) {
    if (s == "a") return TerminalFamily::A;
    if (s == "b") return TerminalFamily::B;
    if (s == "c") return TerminalFamily::C;
    if (s == "d") return TerminalFamily::D;
    throw ParseError("unknown terminal family '" + s + "'");
}

GridPart part_from(const std::string& s) {
    if (s == "whole") return GridPart::Whole;
    if (s == "LB") return GridPart::LB;
    if (s == "TR") return GridPart::TR;
    throw ParseError("unknown grid part '" + s + "'");
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

// Counterclockwise order starting at the positive x axis. Exact for the
// dyadic coordinates used by the constructions.
bool ccw_before(const Point& a, const Point& b) {
    auto half = [](const Point& d) { return (d.y < 0.0 || (d.y == 0.0 && d.x < 0.0)) ? 1 : 0; };
    int ha = half(a);
    int hb = half(b);
    if (ha != hb) return ha < hb;
    return a.x * b.y - a.y * b.x > 0.0;
}

} // namespace

VertexLabel VertexLabel::grid(int i, int j, int q, int l, GridPart part) {
    VertexLabel v;
    v.kind = LabelKind::Grid;
    v.i = i;
    v.j = j;
    v.q = q;
    v.l = l;
    v.part = part;
    return v;
}

VertexLabel VertexLabel::hblue(int i, int j, int l) {
    VertexLabel v;
    v.kind = LabelKind::HBlue;
    v.i = i;
    v.j = j;
    v.l = l;
    return v;
}

VertexLabel VertexLabel::vblue(int i, int j, int l) {
    VertexLabel v;
    v.kind = LabelKind::VBlue;
    v.i = i;
    v.j = j;
    v.l = l;
    return v;
}

VertexLabel VertexLabel::terminal(TerminalFamily family, int index) {
    VertexLabel v;
    v.kind = LabelKind::Terminal;
    v.family = family;
    v.index = index;
    return v;
}

VertexLabel VertexLabel::tree(TerminalFamily family, int index, std::string path) {
    VertexLabel v;
    v.kind = LabelKind::TreeNode;
    v.family = family;
    v.index = index;
    v.tree_path = std::move(path);
    return v;
}

VertexLabel VertexLabel::plain(int index) {
    VertexLabel v;
    v.kind = LabelKind::Plain;
    v.index = index;
    return v;
}

std::string VertexLabel::to_string() const {
    std::ostringstream os;
    switch (kind) {
    case LabelKind::Grid:
        os << "w[" << i << ',' << j << ';' << q << ',' << l << ']';
        if (part != GridPart::Whole) os << part_name(part);
        break;
    case LabelKind::HBlue:
        os << "h[" << i << ',' << j << ';' << l << ']';
        break;
    case LabelKind::VBlue:
        os << "v[" << i << ',' << j << ';' << l << ']';
        break;
    case LabelKind::Terminal:
        os << family_char(family) << index;
        break;
    case LabelKind::TreeNode:
        os << "t:" << family_char(family) << index << ':' << tree_path;
        break;
    case LabelKind::Plain:
        os << 'p' << index;
        break;
    }
    return os.str();
}

std::optional<VertexId> EmbeddedDigraph::find(const VertexLabel& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

VertexId EmbeddedDigraph::at(const VertexLabel& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw std::out_of_range("no vertex " + label.to_string());
    return it->second;
}

std::optional<EdgeId> EmbeddedDigraph::edge_between(VertexId tail, VertexId head) const {
    for (EdgeId e : out_.at(tail)) {
        if (edges_[e].head == head) return e;
    }
    return std::nullopt;
}

VertexId DigraphBuilder::add_vertex(VertexLabel label, Point at) {
    if (index_.count(label)) throw InvalidParameters("duplicate vertex label " + label.to_string());
    if (occupied_.count(at)) {
        throw InvalidParameters("vertices " + label.to_string() + " and " +
                                labels_[occupied_.at(at)].to_string() + " share a position");
    }
    auto id = static_cast<VertexId>(labels_.size());
    index_.emplace(label, id);
    occupied_.emplace(at, id);
    labels_.push_back(std::move(label));
    points_.push_back(at);
    return id;
}

VertexId DigraphBuilder::add_vertex(VertexLabel label) {
    auto n = static_cast<double>(labels_.size());
    return add_vertex(std::move(label), Point{n, n * n});
}

void DigraphBuilder::add_edge(VertexId tail, VertexId head) {
    if (tail >= labels_.size() || head >= labels_.size()) throw std::out_of_range("edge endpoint out of range");
    if (tail == head) throw InvalidParameters("self-loop at " + labels_[tail].to_string());
    auto key = std::make_pair(tail, head);
    if (edge_slot_.count(key)) {
        throw InvalidParameters("parallel edge " + labels_[tail].to_string() + " -> " + labels_[head].to_string());
    }
    edge_slot_.emplace(key, edge_list_.size());
    edge_list_.push_back(Edge{tail, head});
}

void DigraphBuilder::remove_edge(VertexId tail, VertexId head) {
    auto it = edge_slot_.find({tail, head});
    if (it == edge_slot_.end()) throw std::out_of_range("no such edge to remove");
    edge_list_[it->second].reset();
    edge_slot_.erase(it);
}

bool DigraphBuilder::has_edge(VertexId tail, VertexId head) const {
    return edge_slot_.count({tail, head}) > 0;
}

std::optional<VertexId> DigraphBuilder::find(const VertexLabel& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

VertexId DigraphBuilder::at(const VertexLabel& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw std::out_of_range("no vertex " + label.to_string());
    return it->second;
}

EmbeddedDigraph DigraphBuilder::build() const {
    EmbeddedDigraph g;
    g.labels_ = labels_;
    g.points_ = points_;
    g.index_ = index_;
    g.out_.resize(labels_.size());
    g.in_.resize(labels_.size());
    for (const auto& e : edge_list_) {
        if (!e) continue;
        auto id = static_cast<EdgeId>(g.edges_.size());
        g.edges_.push_back(*e);
        g.out_[e->tail].push_back(id);
        g.in_[e->head].push_back(id);
    }
    g.rotation_ = derive_rotation(g);
    return g;
}

DigraphBuilder to_builder(const EmbeddedDigraph& g) {
    DigraphBuilder b;
    for (VertexId v = 0; v < g.num_vertices(); ++v) b.add_vertex(g.label(v), g.point(v));
    for (const auto& e : g.edges()) b.add_edge(e.tail, e.head);
    return b;
}

std::vector<std::vector<EdgeId>> derive_rotation(const EmbeddedDigraph& g) {
    std::vector<std::vector<EdgeId>> rotation(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        auto& rot = rotation[v];
        rot.assign(g.out_edges(v).begin(), g.out_edges(v).end());
        rot.insert(rot.end(), g.in_edges(v).begin(), g.in_edges(v).end());
        const Point& origin = g.point(v);
        auto direction = [&](EdgeId e) {
            const Edge& ed = g.edge(e);
            const Point& p = g.point(ed.tail == v ? ed.head : ed.tail);
            return Point{p.x - origin.x, p.y - origin.y};
        };
        std::sort(rot.begin(), rot.end(), [&](EdgeId a, EdgeId b) {
            Point da = direction(a);
            Point db = direction(b);
            if (ccw_before(da, db)) return true;
            if (ccw_before(db, da)) return false;
            return a < b;
        });
    }
    return rotation;
}

TopoOrder topological_sort(const EmbeddedDigraph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<std::size_t> indegree(n);
    std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
    for (VertexId v = 0; v < n; ++v) {
        indegree[v] = g.in_degree(v);
        if (indegree[v] == 0) ready.push(v);
    }
    TopoOrder result;
    result.order.reserve(n);
    while (!ready.empty()) {
        VertexId v = ready.top();
        ready.pop();
        result.order.push_back(v);
        for (EdgeId e : g.out_edges(v)) {
            VertexId w = g.edge(e).head;
            if (--indegree[w] == 0) ready.push(w);
        }
    }
    if (result.order.size() == n) {
        result.acyclic = true;
        return result;
    }

    // Every remaining vertex has an in-edge from another remaining vertex;
    // walking backwards must revisit a vertex.
    result.order.clear();
    VertexId start = 0;
    while (indegree[start] == 0) ++start;
    std::vector<int> seen(n, -1);
    std::vector<VertexId> walk;
    VertexId v = start;
    while (seen[v] < 0) {
        seen[v] = static_cast<int>(walk.size());
        walk.push_back(v);
        for (EdgeId e : g.in_edges(v)) {
            VertexId u = g.edge(e).tail;
            if (indegree[u] > 0) {
                v = u;
                break;
            }
        }
    }
    // walk[seen[v]..] traversed backwards forms the cycle.
    std::vector<VertexId> cycle(walk.begin() + seen[v], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    cycle.push_back(cycle.front());
    result.cycle = std::move(cycle);
    return result;
}

bool is_weakly_connected(const EmbeddedDigraph& g) {
    const std::size_t n = g.num_vertices();
    if (n <= 1) return true;
    std::vector<bool> seen(n, false);
    std::deque<VertexId> queue{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        auto visit = [&](VertexId w) {
            if (!seen[w]) {
                seen[w] = true;
                ++count;
                queue.push_back(w);
            }
        };
        for (EdgeId e : g.out_edges(v)) visit(g.edge(e).head);
        for (EdgeId e : g.in_edges(v)) visit(g.edge(e).tail);
    }
    return count == n;
}

EmbeddingCheck check_planar_embedding(const EmbeddedDigraph& g) {
    if (g.num_vertices() == 0 || !is_weakly_connected(g)) {
        throw NotConnected("underlying undirected graph is not connected");
    }
    const auto v_count = static_cast<long>(g.num_vertices());
    const auto e_count = static_cast<long>(g.num_edges());
    long faces = 1;
    if (e_count > 0) {
        // Dart 2e runs tail->head along edge e, dart 2e+1 runs head->tail.
        const std::size_t darts = 2 * g.num_edges();
        std::vector<std::size_t> pos_at_origin(darts);
        for (VertexId v = 0; v < g.num_vertices(); ++v) {
            auto rot = g.rotation(v);
            for (std::size_t p = 0; p < rot.size(); ++p) {
                const Edge& ed = g.edge(rot[p]);
                pos_at_origin[2 * rot[p] + (ed.tail == v ? 0 : 1)] = p;
            }
        }
        auto origin = [&](std::size_t d) {
            const Edge& ed = g.edge(static_cast<EdgeId>(d / 2));
            return d % 2 == 0 ? ed.tail : ed.head;
        };
        auto next = [&](std::size_t d) {
            std::size_t rev = d ^ 1U;
            VertexId v = origin(rev);
            auto rot = g.rotation(v);
            EdgeId e = rot[(pos_at_origin[rev] + 1) % rot.size()];
            return 2 * static_cast<std::size_t>(e) + (g.edge(e).tail == v ? 0 : 1);
        };
        std::vector<bool> used(darts, false);
        faces = 0;
        for (std::size_t d = 0; d < darts; ++d) {
            if (used[d]) continue;
            ++faces;
            for (std::size_t c = d; !used[c]; c = next(c)) used[c] = true;
        }
    }
    EmbeddingCheck check;
    check.faces = static_cast<int>(faces);
    check.genus = static_cast<int>((2 - v_count + e_count - faces) / 2);
    return check;
}

namespace {

std::vector<VertexId> neighbors(const EmbeddedDigraph& g, std::span<const VertexId> set, bool outward) {
    std::vector<bool> in_set(g.num_vertices(), false);
    for (VertexId v : set) in_set.at(v) = true;
    std::vector<bool> found(g.num_vertices(), false);
    for (VertexId v : set) {
        auto incident = outward ? g.out_edges(v) : g.in_edges(v);
        for (EdgeId e : incident) {
            VertexId w = outward ? g.edge(e).head : g.edge(e).tail;
            if (!in_set[w]) found[w] = true;
        }
    }
    std::vector<VertexId> result;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (found[v]) result.push_back(v);
    }
    return result;
}

} // namespace

std::vector<VertexId> out_neighbors(const EmbeddedDigraph& g, std::span<const VertexId> set) {
    return neighbors(g, set, true);
}

std::vector<VertexId> in_neighbors(const EmbeddedDigraph& g, std::span<const VertexId> set) {
    return neighbors(g, set, false);
}

std::size_t max_in_degree(const EmbeddedDigraph& g) {
    std::size_t best = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) best = std::max(best, g.in_degree(v));
    return best;
}

std::size_t max_out_degree(const EmbeddedDigraph& g) {
    std::size_t best = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) best = std::max(best, g.out_degree(v));
    return best;
}

bool is_split_edge(const EmbeddedDigraph& g, EdgeId e) {
    const auto& t = g.label(g.edge(e).tail);
    const auto& h = g.label(g.edge(e).head);
    return t.is_grid() && h.is_grid() && t.part == GridPart::LB && h.part == GridPart::TR && t.i == h.i &&
           t.j == h.j && t.q == h.q && t.l == h.l;
}

nlohmann::json label_to_json(const VertexLabel& label) {
    using nlohmann::json;
    switch (label.kind) {
    case LabelKind::Grid:
        return json{{"kind", "grid"}, {"i", label.i}, {"j", label.j}, {"q", label.q}, {"l", label.l},
                    {"part", part_name(label.part)}};
    case LabelKind::HBlue:
        return json{{"kind", "hblue"}, {"i", label.i}, {"j", label.j}, {"l", label.l}};
    case LabelKind::VBlue:
        return json{{"kind", "vblue"}, {"i", label.i}, {"j", label.j}, {"l", label.l}};
    case LabelKind::Terminal:
        return json{{"kind", "terminal"}, {"family", std::string(1, family_char(label.family))},
                    {"index", label.index}};
    case LabelKind::TreeNode:
        return json{{"kind", "tree"}, {"family", std::string(1, family_char(label.family))},
                    {"index", label.index}, {"path", label.tree_path}};
    case LabelKind::Plain:
        return json{{"kind", "plain"}, {"index", label.index}};
    }
    return {};
}

VertexLabel label_from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "grid") {
            return VertexLabel::grid(j.at("i").get<int>(), j.at("j").get<int>(), j.at("q").get<int>(),
                                     j.at("l").get<int>(), part_from(j.at("part").get<std::string>()));
        }
        if (kind == "hblue") return VertexLabel::hblue(j.at("i").get<int>(), j.at("j").get<int>(), j.at("l").get<int>());
        if (kind == "vblue") return VertexLabel::vblue(j.at("i").get<int>(), j.at("j").get<int>(), j.at("l").get<int>());
        if (kind == "terminal") {
            return VertexLabel::terminal(family_from(j.at("family").get<std::string>()), j.at("index").get<int>());
        }
        if (kind == "tree") {
            return VertexLabel::tree(family_from(j.at("family").get<std::string>()), j.at("index").get<int>(),
                                     j.at("path").get<std::string>());
        }
        if (kind == "plain") return VertexLabel::plain(j.at("index").get<int>());
        throw ParseError("unknown vertex kind '" + kind + "'");
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed vertex label: ") + ex.what());
    }
}

nlohmann::json graph_to_json(const EmbeddedDigraph& g) {
    nlohmann::json vertices = nlohmann::json::array();
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        vertices.push_back({{"label", label_to_json(g.label(v))}, {"x", g.point(v).x}, {"y", g.point(v).y}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.tail, e.head});
    return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

EmbeddedDigraph graph_from_json(const nlohmann::json& j) {
    try {
        DigraphBuilder b;
        for (const auto& v : j.at("vertices")) {
            b.add_vertex(label_from_json(v.at("label")), Point{v.at("x").get<double>(), v.at("y").get<double>()});
        }
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a [tail, head] pair");
            b.add_edge(e[0].get<VertexId>(), e[1].get<VertexId>());
        }
        return b.build();
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed graph: ") + ex.what());
    } catch (const std::out_of_range& ex) {
        throw ParseError(std::string("malformed graph: ") + ex.what());
    } catch (const InvalidParameters& ex) {
        throw ParseError(std::string("malformed graph: ") + ex.what());
    }
}

std::string to_dot(const EmbeddedDigraph& g) {
    std::ostringstream os;
    os << "digraph G {\n";
    os << "  node [shape=point];\n";
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto& p = g.point(v);
        os << "  \"" << g.label(v).to_string() << "\" [pos=\"" << format_number(p.x) << ',' << format_number(p.y)
           << "!\"];\n";
    }
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        os << "  \"" << g.label(ed.tail).to_string() << "\" -> \"" << g.label(ed.head).to_string() << '"';
        if (is_split_edge(g, e)) os << " [style=dotted]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace dpath
