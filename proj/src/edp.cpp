#include "dpath/edp.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <unordered_set>

#include "dpath/errors.hpp"

namespace dpath {

namespace {

std::string edge_name(const EmbeddedDigraph& g, VertexId u, VertexId v) {
    return g.label(u).to_string() + " -> " + g.label(v).to_string();
}

// Shared structural part of both checkers. Returns the edge ids of each path.
std::vector<std::vector<EdgeId>> check_paths(const EmbeddedDigraph& g, const TerminalSet& terminals,
                                             const PathSet& ps, PathCheck& check) {
    auto fail = [&](std::string msg) {
        check.ok = false;
        check.violations.push_back(std::move(msg));
    };
    std::vector<std::vector<EdgeId>> edge_ids(ps.paths.size());
    if (ps.paths.size() != terminals.pairs.size()) {
        fail("expected " + std::to_string(terminals.pairs.size()) + " paths, got " +
             std::to_string(ps.paths.size()));
        return edge_ids;
    }
    for (std::size_t p = 0; p < ps.paths.size(); ++p) {
        const Path& path = ps.paths[p];
        const TerminalPair& tp = terminals.pairs[p];
        const std::string tag = "path " + std::to_string(p);
        if (path.empty()) {
            fail(tag + " is empty");
            continue;
        }
        if (std::any_of(path.begin(), path.end(), [&](VertexId v) { return v >= g.num_vertices(); })) {
            fail(tag + " names a vertex outside the graph");
            continue;
        }
        if (path.front() != tp.source) fail(tag + " starts at " + g.label(path.front()).to_string());
        if (path.back() != tp.sink) fail(tag + " ends at " + g.label(path.back()).to_string());
        std::set<EdgeId> seen;
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            auto e = g.edge_between(path[s], path[s + 1]);
            if (!e) {
                fail(tag + " uses missing edge " + edge_name(g, path[s], path[s + 1]));
                continue;
            }
            if (!seen.insert(*e).second) fail(tag + " repeats edge " + edge_name(g, path[s], path[s + 1]));
            edge_ids[p].push_back(*e);
        }
    }
    return edge_ids;
}

using Bitset = std::vector<std::uint64_t>;

bool test_bit(const Bitset& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }
void set_bit(Bitset& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
void clear_bit(Bitset& b, std::size_t i) { b[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto w : b) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
        return h;
    }
};

void require_dag(const EmbeddedDigraph& g) {
    if (!topological_sort(g).acyclic) throw InvalidParameters("disjoint-paths solver requires a DAG");
}

class EdpSearch {
public:
    EdpSearch(const EmbeddedDigraph& g, const TerminalSet& terminals, std::uint64_t budget, EdpStats* stats)
        : g_(g), pairs_(terminals.pairs), budget_(budget), stats_(stats),
          words_((g.num_edges() + 63) / 64 + 1), used_(words_, 0) {
        result_.paths.resize(pairs_.size());
    }

    std::optional<PathSet> run() {
        bool found = route(0);
        if (stats_) {
            stats_->expansions = expansions_;
            stats_->memo_hits = memo_hits_;
        }
        if (found) return result_;
        return std::nullopt;
    }

private:
    // Vertices reachable from `from` (forward) or reaching `from` (backward)
    // over unused edges.
    std::vector<char> reach(VertexId from, bool forward) const {
        std::vector<char> seen(g_.num_vertices(), 0);
        std::vector<VertexId> stack{from};
        seen[from] = 1;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            auto incident = forward ? g_.out_edges(v) : g_.in_edges(v);
            for (EdgeId e : incident) {
                if (test_bit(used_, e)) continue;
                VertexId w = forward ? g_.edge(e).head : g_.edge(e).tail;
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        return seen;
    }

    bool route(std::size_t p) {
        if (p == pairs_.size()) return true;

        // Residual edges any remaining pair could still use; the last word
        // tags the pair index so states of different depths never collide.
        Bitset key(words_, 0);
        key.back() = p;
        std::vector<char> to_sink;
        for (std::size_t r = p; r < pairs_.size(); ++r) {
            const auto [s, t] = pairs_[r];
            if (s == t) continue;
            auto fwd = reach(s, true);
            if (!fwd[t]) return false;
            auto bwd = reach(t, false);
            for (EdgeId e = 0; e < g_.num_edges(); ++e) {
                if (!test_bit(used_, e) && fwd[g_.edge(e).tail] && bwd[g_.edge(e).head]) set_bit(key, e);
            }
            if (r == p) to_sink = std::move(bwd);
        }
        if (failed_.count(key)) {
            ++memo_hits_;
            return false;
        }

        const auto [s, t] = pairs_[p];
        Path path{s};
        bool ok = (s == t) ? commit(p, path) : extend(p, s, t, to_sink, path);
        if (!ok) failed_.insert(std::move(key));
        return ok;
    }

    bool commit(std::size_t p, const Path& path) {
        result_.paths[p] = path;
        return route(p + 1);
    }

    bool extend(std::size_t p, VertexId v, VertexId t, const std::vector<char>& to_sink, Path& path) {
        for (EdgeId e : g_.out_edges(v)) {
            if (test_bit(used_, e)) continue;
            VertexId w = g_.edge(e).head;
            if (!to_sink[w]) continue;
            if (++expansions_ > budget_) throw BudgetExceeded("edge-disjoint paths search exceeded its budget");
            set_bit(used_, e);
            path.push_back(w);
            bool ok = (w == t) ? commit(p, path) : extend(p, w, t, to_sink, path);
            path.pop_back();
            clear_bit(used_, e);
            if (ok) return true;
        }
        return false;
    }

    const EmbeddedDigraph& g_;
    const std::vector<TerminalPair>& pairs_;
    std::uint64_t budget_;
    EdpStats* stats_;
    std::size_t words_;
    Bitset used_;
    std::unordered_set<Bitset, BitsetHash> failed_;
    PathSet result_;
    std::uint64_t expansions_ = 0;
    std::uint64_t memo_hits_ = 0;
};

class PebbleSearch {
public:
    PebbleSearch(const EmbeddedDigraph& g, const TerminalSet& terminals, std::uint64_t budget)
        : g_(g), pairs_(terminals.pairs), budget_(budget), rank_(g.num_vertices()),
          terminal_owner_(g.num_vertices()) {
        auto order = topological_sort(g).order;
        for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            terminal_owner_[pairs_[p].source].push_back(p);
            terminal_owner_[pairs_[p].sink].push_back(p);
        }
    }

    std::optional<PathSet> run() {
        std::vector<VertexId> pos;
        for (const auto& tp : pairs_) {
            pos.push_back(tp.source);
            paths_.paths.push_back({tp.source});
        }
        if (search(pos)) return paths_;
        return std::nullopt;
    }

private:
    bool search(std::vector<VertexId>& pos) {
        std::size_t mover = pairs_.size();
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            if (pos[p] == pairs_[p].sink) continue;
            if (mover == pairs_.size() || rank_[pos[p]] < rank_[pos[mover]]) mover = p;
        }
        if (mover == pairs_.size()) return true;
        if (failed_.count(pos)) return false;

        const VertexId from = pos[mover];
        for (EdgeId e : g_.out_edges(from)) {
            const VertexId w = g_.edge(e).head;
            if (++expansions_ > budget_) throw BudgetExceeded("vertex-disjoint paths search exceeded its budget");
            if (!free_for(mover, w, pos)) continue;
            pos[mover] = w;
            paths_.paths[mover].push_back(w);
            if (search(pos)) return true;
            paths_.paths[mover].pop_back();
            pos[mover] = from;
        }
        failed_.insert(pos);
        return false;
    }

    bool free_for(std::size_t mover, VertexId w, const std::vector<VertexId>& pos) const {
        for (std::size_t p = 0; p < pos.size(); ++p) {
            if (p != mover && pos[p] == w) return false;
        }
        if (w == pairs_[mover].sink) return true;
        return terminal_owner_[w].empty();
    }

    const EmbeddedDigraph& g_;
    const std::vector<TerminalPair>& pairs_;
    std::uint64_t budget_;
    std::uint64_t expansions_ = 0;
    std::vector<std::size_t> rank_;
    std::vector<std::vector<std::size_t>> terminal_owner_;
    std::set<std::vector<VertexId>> failed_;
    PathSet paths_;
};

} // namespace

PathCheck check_edp_solution(const EmbeddedDigraph& g, const TerminalSet& terminals, const PathSet& ps) {
    PathCheck check;
    auto edge_ids = check_paths(g, terminals, ps, check);
    std::map<EdgeId, std::size_t> owner;
    for (std::size_t p = 0; p < edge_ids.size(); ++p) {
        for (EdgeId e : std::set<EdgeId>(edge_ids[p].begin(), edge_ids[p].end())) {
            auto [it, fresh] = owner.emplace(e, p);
            if (!fresh) {
                check.ok = false;
                check.violations.push_back("paths " + std::to_string(it->second) + " and " + std::to_string(p) +
                                           " share edge " + edge_name(g, g.edge(e).tail, g.edge(e).head));
            }
        }
    }
    return check;
}

PathCheck check_vdp_solution(const EmbeddedDigraph& g, const TerminalSet& terminals, const PathSet& ps) {
    PathCheck check;
    check_paths(g, terminals, ps, check);
    if (ps.paths.size() != terminals.pairs.size()) return check;
    for (std::size_t p = 0; p < ps.paths.size(); ++p) {
        const Path& path = ps.paths[p];
        if (path.size() < 3) continue;
        const std::set<VertexId> internal(path.begin() + 1, path.end() - 1);
        for (std::size_t q = 0; q < ps.paths.size(); ++q) {
            if (q == p) continue;
            for (VertexId v : ps.paths[q]) {
                if (internal.count(v)) {
                    check.ok = false;
                    check.violations.push_back("paths " + std::to_string(p) + " and " + std::to_string(q) +
                                               " share vertex " + g.label(v).to_string());
                }
            }
        }
    }
    return check;
}

std::optional<PathSet> solve_edp_dag(const EmbeddedDigraph& g, const TerminalSet& terminals, EdpSolveOptions opts,
                                     EdpStats* stats) {
    require_dag(g);
    for (const auto& tp : terminals.pairs) {
        if (tp.source >= g.num_vertices() || tp.sink >= g.num_vertices()) {
            throw std::out_of_range("terminal outside the graph");
        }
    }
    return EdpSearch(g, terminals, opts.budget, stats).run();
}

VdpInstance edp_to_vdp_dag(const EmbeddedDigraph& g, const TerminalSet& terminals) {
    require_dag(g);
    DigraphBuilder b;
    VdpInstance out;
    out.edge_vertex.resize(g.num_edges());
    int next = 0;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        out.edge_vertex[e] = b.add_vertex(VertexLabel::plain(next++));
        out.original.push_back(e);
    }
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        for (EdgeId f : g.out_edges(g.edge(e).head)) b.add_edge(out.edge_vertex[e], out.edge_vertex[f]);
    }
    for (const auto& tp : terminals.pairs) {
        VertexId src = b.add_vertex(VertexLabel::plain(next++));
        VertexId dst = b.add_vertex(VertexLabel::plain(next++));
        out.original.push_back(std::nullopt);
        out.original.push_back(std::nullopt);
        for (EdgeId e : g.out_edges(tp.source)) b.add_edge(src, out.edge_vertex[e]);
        for (EdgeId e : g.in_edges(tp.sink)) b.add_edge(out.edge_vertex[e], dst);
        if (tp.source == tp.sink) b.add_edge(src, dst);
        out.terminals.pairs.push_back({src, dst});
    }
    out.graph = b.build();
    out.original_terminals = terminals;
    return out;
}

PathSet edp_paths_to_vdp(const EmbeddedDigraph& g, const VdpInstance& vdp, const PathSet& ps) {
    PathSet out;
    for (std::size_t p = 0; p < ps.paths.size(); ++p) {
        const Path& path = ps.paths.at(p);
        Path mapped{vdp.terminals.pairs.at(p).source};
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            auto e = g.edge_between(path[s], path[s + 1]);
            if (!e) throw InvalidSolution("path uses missing edge " + edge_name(g, path[s], path[s + 1]));
            mapped.push_back(vdp.edge_vertex[*e]);
        }
        mapped.push_back(vdp.terminals.pairs.at(p).sink);
        out.paths.push_back(std::move(mapped));
    }
    return out;
}

PathSet vdp_paths_to_edp(const EmbeddedDigraph& g, const VdpInstance& vdp, const PathSet& ps) {
    PathSet out;
    for (const Path& path : ps.paths) {
        if (path.size() < 2) throw InvalidSolution("line-graph path must join two apexes");
        Path mapped;
        for (std::size_t s = 1; s + 1 < path.size(); ++s) {
            const auto e = vdp.original.at(path[s]);
            if (!e) throw InvalidSolution("line-graph path passes through an apex");
            const Edge& ed = g.edge(*e);
            if (mapped.empty()) mapped.push_back(ed.tail);
            mapped.push_back(ed.head);
        }
        if (mapped.empty()) {
            // Apex-to-apex: the zero-edge path of a pair whose source is its sink.
            auto it = std::find_if(vdp.terminals.pairs.begin(), vdp.terminals.pairs.end(),
                                   [&](const TerminalPair& tp) { return tp.source == path.front(); });
            if (it == vdp.terminals.pairs.end()) throw InvalidSolution("path does not start at an apex");
            mapped.push_back(vdp.original_terminals.pairs.at(it - vdp.terminals.pairs.begin()).source);
        }
        out.paths.push_back(std::move(mapped));
    }
    return out;
}

std::optional<PathSet> solve_vdp_dag(const EmbeddedDigraph& g, const TerminalSet& terminals, EdpSolveOptions opts) {
    require_dag(g);
    return PebbleSearch(g, terminals, opts.budget).run();
}

std::uint64_t budget_from_env(std::uint64_t fallback) {
    const char* raw = std::getenv("DPATH_BUDGET");
    if (raw == nullptr || *raw == '\0') return fallback;
    char* end = nullptr;
    unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0) throw InvalidParameters("DPATH_BUDGET must be a positive integer");
    return v;
}

nlohmann::json pathset_to_json(const EmbeddedDigraph& g, const PathSet& ps) {
    nlohmann::json out = nlohmann::json::array();
    for (const Path& path : ps.paths) {
        nlohmann::json seq = nlohmann::json::array();
        for (VertexId v : path) seq.push_back(label_to_json(g.label(v)));
        out.push_back(std::move(seq));
    }
    return out;
}

PathSet pathset_from_json(const EmbeddedDigraph& g, const nlohmann::json& j) {
    try {
        PathSet ps;
        for (const auto& seq : j) {
            Path path;
            for (const auto& lab : seq) {
                auto v = g.find(label_from_json(lab));
                if (!v) throw ParseError("path names an unknown vertex");
                path.push_back(*v);
            }
            ps.paths.push_back(std::move(path));
        }
        return ps;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed path set: ") + ex.what());
    }
}

} // namespace dpath
