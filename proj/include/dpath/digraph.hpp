#ifndef DPATH_DIGRAPH_HPP
#define DPATH_DIGRAPH_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace dpath {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class LabelKind : std::uint8_t { Grid, HBlue, VBlue, Terminal, TreeNode, Plain };
enum class GridPart : std::uint8_t { Whole, LB, TR };
enum class TerminalFamily : std::uint8_t { A, B, C, D };

// Semantic name of a vertex. Which fields are meaningful depends on `kind`:
//   Grid      w_{i,j}^{q,l} (part Whole, or LB/TR for a split vertex)
//   HBlue     h_{i,j}^{i+1,j}(l)
//   VBlue     v_{i,j}^{i,j+1}(l)
//   Terminal  a_index, b_index, c_index, d_index
//   TreeNode  internal node of a degree-reduction tree; `tree_path` is the
//             L/R route from the terminal at its root
//   Plain     hand-built or auxiliary vertex numbered by `index`
struct VertexLabel {
    LabelKind kind = LabelKind::Plain;
    int i = 0;
    int j = 0;
    int q = 0;
    int l = 0;
    GridPart part = GridPart::Whole;
    TerminalFamily family = TerminalFamily::A;
    int index = 0;
    std::string tree_path;

    auto operator<=>(const VertexLabel&) const = default;

    static VertexLabel grid(int i, int j, int q, int l, GridPart part = GridPart::Whole);
    static VertexLabel hblue(int i, int j, int l);
    static VertexLabel vblue(int i, int j, int l);
    static VertexLabel terminal(TerminalFamily family, int index);
    static VertexLabel tree(TerminalFamily family, int index, std::string path);
    static VertexLabel plain(int index);

    bool is_grid() const { return kind == LabelKind::Grid; }
    bool is_terminal() const { return kind == LabelKind::Terminal; }

    std::string to_string() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    auto operator<=>(const Point&) const = default;
};

struct Edge {
    VertexId tail;
    VertexId head;
};

// Source/sink pairs over vertex ids, in routing order.
struct TerminalPair {
    VertexId source;
    VertexId sink;
    bool operator==(const TerminalPair&) const = default;
};

struct TerminalSet {
    std::vector<TerminalPair> pairs;
};

class DigraphBuilder;

// Directed graph with labeled vertices and planar coordinates. The rotation
// system (cyclic counterclockwise order of incident edges at each vertex) is
// derived from the coordinates when the graph is built. Immutable afterwards.
class EmbeddedDigraph {
public:
    EmbeddedDigraph() = default;

    std::size_t num_vertices() const { return labels_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    const VertexLabel& label(VertexId v) const { return labels_.at(v); }
    const Point& point(VertexId v) const { return points_.at(v); }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    std::span<const Edge> edges() const { return edges_; }

    std::span<const EdgeId> out_edges(VertexId v) const { return out_.at(v); }
    std::span<const EdgeId> in_edges(VertexId v) const { return in_.at(v); }
    std::span<const EdgeId> rotation(VertexId v) const { return rotation_.at(v); }

    std::size_t out_degree(VertexId v) const { return out_.at(v).size(); }
    std::size_t in_degree(VertexId v) const { return in_.at(v).size(); }

    std::optional<VertexId> find(const VertexLabel& label) const;
    // Throws std::out_of_range when absent.
    VertexId at(const VertexLabel& label) const;
    std::optional<EdgeId> edge_between(VertexId tail, VertexId head) const;

private:
    friend class DigraphBuilder;

    std::vector<VertexLabel> labels_;
    std::vector<Point> points_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::vector<std::vector<EdgeId>> rotation_;
    std::map<VertexLabel, VertexId> index_;
};

class DigraphBuilder {
public:
    // Throws InvalidParameters on a duplicate label or duplicate coordinates.
    VertexId add_vertex(VertexLabel label, Point at);
    // Vertex placed at (n, n^2) for the n-th vertex; no three such points
    // are collinear, so the derived rotation has no ties.
    VertexId add_vertex(VertexLabel label);
    // Throws InvalidParameters on self-loops and parallel edges.
    void add_edge(VertexId tail, VertexId head);
    // Throws std::out_of_range if the edge does not exist.
    void remove_edge(VertexId tail, VertexId head);
    bool has_edge(VertexId tail, VertexId head) const;

    std::optional<VertexId> find(const VertexLabel& label) const;
    VertexId at(const VertexLabel& label) const;
    std::size_t num_vertices() const { return labels_.size(); }

    EmbeddedDigraph build() const;

private:
    std::vector<VertexLabel> labels_;
    std::vector<Point> points_;
    std::map<VertexLabel, VertexId> index_;
    std::map<Point, VertexId> occupied_;
    // Insertion order is the edge id order of the built graph.
    std::map<std::pair<VertexId, VertexId>, std::size_t> edge_slot_;
    std::vector<std::optional<Edge>> edge_list_;
};

// Copies vertices and edges of an existing graph into a fresh builder.
DigraphBuilder to_builder(const EmbeddedDigraph& g);

struct TopoOrder {
    bool acyclic = false;
    std::vector<VertexId> order;  // when acyclic
    std::vector<VertexId> cycle;  // witness v0 -> v1 -> ... -> v0 otherwise
};

// Kahn's algorithm; ties are broken by smallest vertex id.
TopoOrder topological_sort(const EmbeddedDigraph& g);

struct EmbeddingCheck {
    int faces = 0;
    int genus = 0;
};

bool is_weakly_connected(const EmbeddedDigraph& g);

// Traces the faces of the rotation system and applies V - E + F = 2 - 2g.
// Throws NotConnected when the underlying undirected graph is disconnected.
EmbeddingCheck check_planar_embedding(const EmbeddedDigraph& g);

// N+(S): vertices outside S with an edge from S. N-(S) likewise for edges into S.
std::vector<VertexId> out_neighbors(const EmbeddedDigraph& g, std::span<const VertexId> set);
std::vector<VertexId> in_neighbors(const EmbeddedDigraph& g, std::span<const VertexId> set);

std::size_t max_in_degree(const EmbeddedDigraph& g);
std::size_t max_out_degree(const EmbeddedDigraph& g);

// Counterclockwise angular order of the incident edges of every vertex.
std::vector<std::vector<EdgeId>> derive_rotation(const EmbeddedDigraph& g);

// LB -> TR edge produced by splitting a grid vertex.
bool is_split_edge(const EmbeddedDigraph& g, EdgeId e);

nlohmann::json label_to_json(const VertexLabel& label);
VertexLabel label_from_json(const nlohmann::json& j);

// {"vertices":[{"label":{...},"x":..,"y":..}], "edges":[[tail,head],...]}
nlohmann::json graph_to_json(const EmbeddedDigraph& g);
EmbeddedDigraph graph_from_json(const nlohmann::json& j);

// Graphviz rendering with pinned `pos` attributes and dotted split edges.
std::string to_dot(const EmbeddedDigraph& g);

} // namespace dpath

#endif
