// dpath: generate Grid Tiling instances, reduce them to edge-disjoint paths on
// planar DAGs, cross-check both solvers and export the gadget graphs.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error,
// 3 a solver budget was exceeded.

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpath/digraph.hpp"
#include "dpath/edp.hpp"
#include "dpath/errors.hpp"
#include "dpath/gridtiling.hpp"
#include "dpath/mappers.hpp"
#include "dpath/reduction.hpp"

namespace {

using nlohmann::json;
using namespace dpath;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ParseError(path + ": " + ex.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

GridTilingInstance load_instance(const std::string& path) {
    GridTilingInstance inst = instance_from_json(read_json(path));
    if (auto v = validate_instance(inst); !v.empty()) throw ParseError(path + ": " + v.front().message);
    return inst;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t dotted_edges(const EmbeddedDigraph& g) {
    std::size_t n = 0;
    for (EdgeId e = 0; e < g.num_edges(); ++e) n += is_split_edge(g, e) ? 1 : 0;
    return n;
}

json instance_summary(const GridTilingInstance& inst) {
    json sizes = json::array();
    for (int y = 1; y <= inst.k; ++y) {
        for (int x = 1; x <= inst.k; ++x) sizes.push_back(inst.at(x, y).size());
    }
    return {{"k", inst.k}, {"N", inst.N}, {"set_sizes", std::move(sizes)}};
}

// Structural checks on a reduction output; `ok` collects the verdict.
json structure_report(const ReductionOutput& out, bool& ok) {
    const auto topo = topological_sort(out.graph);
    int genus = -1;
    int faces = -1;
    try {
        const auto emb = check_planar_embedding(out.graph);
        genus = emb.genus;
        faces = emb.faces;
    } catch (const NotConnected&) {
    }
    const SizeCounts actual = actual_counts(out.graph);
    const auto max_in = max_in_degree(out.graph);
    const auto max_out = max_out_degree(out.graph);
    const bool counts_match = actual == out.counts;
    const bool terminals_ok = out.terminals.pairs.size() == static_cast<std::size_t>(2 * out.provenance.k);
    const bool degree_ok = !out.degree_reduced || (max_in <= 2 && max_out <= 2);
    ok = ok && topo.acyclic && genus == 0 && counts_match && terminals_ok && degree_ok;
    return {{"predicted", {{"vertices", out.counts.vertices}, {"edges", out.counts.edges}}},
            {"actual", {{"vertices", actual.vertices}, {"edges", actual.edges}}},
            {"counts_match", counts_match},
            {"dag", topo.acyclic},
            {"genus", genus},
            {"faces", faces},
            {"max_in_degree", max_in},
            {"max_out_degree", max_out},
            {"degree_reduced", out.degree_reduced},
            {"terminal_pairs", out.terminals.pairs.size()},
            {"dotted_edges", dotted_edges(out.graph)}};
}

struct RoundtripResult {
    json report;
    int exit_code = kExitOk;
    std::string summary;
};

RoundtripResult roundtrip(const std::string& path, bool degree2, std::uint64_t budget) {
    RoundtripResult res;
    res.report["file"] = path;
    const auto t_start = std::chrono::steady_clock::now();
    try {
        const GridTilingInstance inst = load_instance(path);
        res.report["instance"] = instance_summary(inst);
        bool ok = true;

        auto t0 = std::chrono::steady_clock::now();
        const auto gt = solve_gt_brute_force(inst, GtSolveOptions{budget});
        const double gt_ms = ms_since(t0);

        t0 = std::chrono::steady_clock::now();
        ReductionOutput out = reduce(inst);
        if (degree2) out = reduce_degree(out);
        const double reduce_ms = ms_since(t0);
        res.report["structure"] = structure_report(out, ok);

        t0 = std::chrono::steady_clock::now();
        EdpStats stats;
        const auto edp = solve_edp_dag(out.graph, out.terminals, EdpSolveOptions{budget}, &stats);
        const double edp_ms = ms_since(t0);

        const bool agree = gt.has_value() == edp.has_value();
        ok = ok && agree;
        json solvers = {{"grid_tiling", gt ? "feasible" : "infeasible"},
                        {"edp", edp ? "feasible" : "infeasible"},
                        {"agree", agree},
                        {"edp_expansions", stats.expansions}};
        if (gt) solvers["grid_tiling_solution"] = assignment_to_json(*gt);
        res.report["solvers"] = solvers;

        json mapping = json::object();
        if (gt) {
            const PathSet forward = gt_solution_to_paths(out, *gt);
            const bool forward_ok = static_cast<bool>(check_edp_solution(out.graph, out.terminals, forward));
            const bool forward_confined = check_level_confinement(out, forward);
            const bool identity = forward_ok && paths_to_gt_solution(out, forward) == *gt;
            mapping["forward_valid"] = forward_ok;
            mapping["forward_confined"] = forward_confined;
            mapping["round_trip_identity"] = identity;
            ok = ok && forward_ok && forward_confined && identity;
        }
        if (edp) {
            bool extracted_ok = false;
            try {
                const GTAssignment extracted = paths_to_gt_solution(out, *edp);
                extracted_ok = check_gt_solution(inst, extracted);
                mapping["extracted"] = assignment_to_json(extracted);
            } catch (const ExtractionFailed& ex) {
                mapping["extraction_error"] = ex.what();
            }
            const bool confined = check_level_confinement(out, *edp);
            mapping["extraction_valid"] = extracted_ok;
            mapping["solver_paths_confined"] = confined;
            mapping["solver_paths"] = pathset_to_json(out.graph, *edp);
            ok = ok && extracted_ok && confined;
        }
        res.report["mapping"] = mapping;
        res.report["timings_ms"] = {{"grid_tiling", gt_ms}, {"reduce", reduce_ms}, {"edp", edp_ms},
                                    {"total", ms_since(t_start)}};
        res.report["verdict"] = ok ? "pass" : "fail";
        res.exit_code = ok ? kExitOk : kExitCheckFailed;

        std::ostringstream os;
        os << path << ": k=" << inst.k << " N=" << inst.N << " |V|=" << out.graph.num_vertices()
           << " |E|=" << out.graph.num_edges() << " grid-tiling " << (gt ? "feasible" : "infeasible") << ", edp "
           << (edp ? "feasible" : "infeasible") << " -> " << (ok ? "PASS" : "FAIL");
        res.summary = os.str();
    } catch (const BudgetExceeded& ex) {
        res.report["verdict"] = "budget-exceeded";
        res.report["error"] = ex.what();
        res.exit_code = kExitBudget;
        res.summary = path + ": budget exceeded (" + ex.what() + ")";
    } catch (const ParseError& ex) {
        res.report["verdict"] = "parse-error";
        res.report["error"] = ex.what();
        res.exit_code = kExitUsage;
        res.summary = path + ": " + ex.what();
    } catch (const Error& ex) {
        res.report["verdict"] = "fail";
        res.report["error"] = ex.what();
        res.exit_code = kExitCheckFailed;
        res.summary = path + ": " + ex.what();
    }
    return res;
}

// Accepts a full reduction output or a bare graph object.
EmbeddedDigraph load_graph(const std::string& path) {
    const json j = read_json(path);
    if (j.contains("graph")) return reduction_from_json(j).graph;
    return graph_from_json(j);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid Tiling to edge-disjoint paths reduction toolkit"};
    app.require_subcommand(1);

    int k = 2;
    int N = 3;
    std::string mode = "planted";
    double density = 0.5;
    int noise = 0;
    std::uint64_t seed = 0;
    std::string out_file;
    auto* gen = app.add_subcommand("gen", "Generate a Grid Tiling instance");
    gen->add_option("--k", k, "Grid-of-cells side length")->required();
    gen->add_option("--N", N, "Universe side length")->required();
    gen->add_option("--mode", mode, "planted or random")->check(CLI::IsMember({"planted", "random"}));
    gen->add_option("--density", density, "Inclusion probability for random mode");
    gen->add_option("--noise", noise, "Extra random pairs per cell for planted mode");
    gen->add_option("--seed", seed, "Generator seed");
    gen->add_option("-o,--out", out_file, "Output file (stdout if omitted)");

    std::string instance_file;
    bool degree2 = false;
    auto* red = app.add_subcommand("reduce", "Reduce an instance to an edge-disjoint paths instance");
    red->add_option("instance", instance_file, "Instance JSON")->required();
    red->add_flag("--degree2", degree2, "Replace terminal stars by binary trees");
    red->add_option("-o,--out", out_file, "Output file for the reduction JSON")->required();

    std::vector<std::string> instance_files;
    unsigned jobs = 1;
    auto* rt = app.add_subcommand("roundtrip", "Solve both sides and verify both mapping directions");
    rt->add_option("instances", instance_files, "Instance JSON files")->required();
    rt->add_flag("--degree2", degree2, "Run on the degree-reduced graph");
    rt->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    std::string graph_file;
    std::string format = "dot";
    auto* exp = app.add_subcommand("export", "Render a graph as DOT or JSON");
    exp->add_option("graph", graph_file, "Reduction output or graph JSON")->required();
    exp->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    exp->add_option("-o,--out", out_file, "Output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) {
            const GridTilingInstance inst =
                mode == "planted" ? generate_planted(k, N, noise, seed) : generate_random(k, N, density, seed);
            write_text(out_file, instance_to_json(inst).dump() + "\n");
            std::cerr << "generated " << mode << " instance k=" << k << " N=" << N << '\n';
            return kExitOk;
        }
        if (*red) {
            const GridTilingInstance inst = load_instance(instance_file);
            ReductionOutput out = reduce(inst);
            if (degree2) out = reduce_degree(out);
            write_text(out_file, reduction_to_json(out).dump() + "\n");
            bool ok = true;
            json report = {{"instance", instance_summary(inst)}, {"structure", structure_report(out, ok)}};
            report["verdict"] = ok ? "pass" : "fail";
            std::cout << report.dump(2) << '\n';
            std::cerr << "reduced to |V|=" << out.graph.num_vertices() << " |E|=" << out.graph.num_edges()
                      << " with " << out.terminals.pairs.size() << " terminal pairs -> " << (ok ? "PASS" : "FAIL")
                      << '\n';
            return ok ? kExitOk : kExitCheckFailed;
        }
        if (*rt) {
            const std::uint64_t budget = budget_from_env();
            std::vector<RoundtripResult> results(instance_files.size());
            for (std::size_t start = 0; start < instance_files.size(); start += jobs) {
                std::vector<std::future<RoundtripResult>> batch;
                for (std::size_t n = start; n < std::min(instance_files.size(), start + jobs); ++n) {
                    batch.push_back(std::async(std::launch::async, roundtrip, instance_files[n], degree2, budget));
                }
                for (std::size_t n = 0; n < batch.size(); ++n) results[start + n] = batch[n].get();
            }
            int code = kExitOk;
            json reports = json::array();
            for (const auto& r : results) {
                std::cerr << r.summary << '\n';
                reports.push_back(r.report);
                code = std::max(code, r.exit_code);
            }
            std::cout << (results.size() == 1 ? reports[0] : reports).dump(2) << '\n';
            return code;
        }
        if (*exp) {
            const EmbeddedDigraph g = load_graph(graph_file);
            write_text(out_file, format == "dot" ? to_dot(g) : graph_to_json(g).dump() + "\n");
            return kExitOk;
        }
    } catch (const ParseError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const InvalidParameters& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const BudgetExceeded& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitUsage;
}
