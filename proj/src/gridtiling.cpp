#include "dpath/gridtiling.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "dpath/errors.hpp"

namespace dpath {

namespace {

const std::set<GridPair> kEmpty;

void check_params(int k, int N) {
    if (k < 1) throw InvalidParameters("k must be at least 1");
    if (N < 2) throw InvalidParameters("N must be at least 2");
}

std::string cell_key(const Cell& c) {
    return std::to_string(c.x) + "," + std::to_string(c.y);
}

class GtSearch {
public:
    GtSearch(const GridTilingInstance& inst, std::uint64_t budget)
        : inst_(inst), budget_(budget), asg_(inst.k) {
        for (int y = 1; y <= inst.k; ++y) {
            for (int x = 1; x <= inst.k; ++x) {
                const auto& s = inst.at(x, y);
                candidates_.emplace_back(s.begin(), s.end());
            }
        }
    }

    std::optional<GTAssignment> run() {
        if (place(0)) return asg_;
        return std::nullopt;
    }

private:
    bool place(std::size_t slot) {
        const int k = inst_.k;
        if (slot == candidates_.size()) return true;
        const int x = static_cast<int>(slot % k) + 1;
        const int y = static_cast<int>(slot / k) + 1;
        for (const GridPair& p : candidates_[slot]) {
            if (++expansions_ > budget_) throw BudgetExceeded("grid tiling search exceeded its budget");
            if (x > 1 && asg_.at(x - 1, y).b > p.b) continue;
            if (y > 1 && asg_.at(x, y - 1).a > p.a) continue;
            asg_.at(x, y) = p;
            if (place(slot + 1)) return true;
        }
        return false;
    }

    const GridTilingInstance& inst_;
    std::uint64_t budget_;
    std::uint64_t expansions_ = 0;
    GTAssignment asg_;
    std::vector<std::vector<GridPair>> candidates_;
};

} // namespace

const std::set<GridPair>& GridTilingInstance::at(int x, int y) const {
    auto it = sets.find(Cell{x, y});
    return it == sets.end() ? kEmpty : it->second;
}

bool GridTilingInstance::contains(int x, int y, GridPair p) const {
    return at(x, y).count(p) > 0;
}

std::vector<Violation> validate_instance(const GridTilingInstance& inst) {
    std::vector<Violation> out;
    if (inst.k < 1) out.push_back({"k = " + std::to_string(inst.k) + " must be at least 1"});
    if (inst.N < 2) out.push_back({"N = " + std::to_string(inst.N) + " must be at least 2"});
    for (int y = 1; y <= inst.k; ++y) {
        for (int x = 1; x <= inst.k; ++x) {
            if (!inst.sets.count(Cell{x, y})) out.push_back({"missing cell (" + cell_key({x, y}) + ")"});
        }
    }
    for (const auto& [cell, pairs] : inst.sets) {
        if (cell.x < 1 || cell.y < 1 || cell.x > inst.k || cell.y > inst.k) {
            out.push_back({"cell (" + cell_key(cell) + ") outside [k]x[k]"});
        }
        for (const auto& p : pairs) {
            if (p.a < 1 || p.b < 1 || p.a > inst.N || p.b > inst.N) {
                std::ostringstream os;
                os << "pair (" << p.a << ',' << p.b << ") in cell (" << cell_key(cell) << ") outside [N]x[N]";
                out.push_back({os.str()});
            }
        }
    }
    return out;
}

bool check_gt_solution(const GridTilingInstance& inst, const GTAssignment& asg) {
    if (asg.k() != inst.k) return false;
    for (int y = 1; y <= inst.k; ++y) {
        for (int x = 1; x <= inst.k; ++x) {
            const GridPair& p = asg.at(x, y);
            if (!inst.contains(x, y, p)) return false;
            if (x < inst.k && p.b > asg.at(x + 1, y).b) return false;
            if (y < inst.k && p.a > asg.at(x, y + 1).a) return false;
        }
    }
    return true;
}

std::optional<GTAssignment> solve_gt_brute_force(const GridTilingInstance& inst, GtSolveOptions opts) {
    if (auto v = validate_instance(inst); !v.empty()) throw InvalidParameters(v.front().message);
    return GtSearch(inst, opts.budget).run();
}

GTAssignment planted_assignment(int k, int N) {
    check_params(k, N);
    GTAssignment asg(k);
    for (int y = 1; y <= k; ++y) {
        for (int x = 1; x <= k; ++x) asg.at(x, y) = GridPair{std::min(y, N), std::min(x, N)};
    }
    return asg;
}

GridTilingInstance generate_planted(int k, int N, int noise, std::uint64_t seed) {
    check_params(k, N);
    if (noise < 0) throw InvalidParameters("noise must be non-negative");
    GridTilingInstance inst{k, N, {}};
    const GTAssignment planted = planted_assignment(k, N);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coord(1, N);
    for (int y = 1; y <= k; ++y) {
        for (int x = 1; x <= k; ++x) {
            auto& s = inst.sets[Cell{x, y}];
            s.insert(planted.at(x, y));
            for (int n = 0; n < noise; ++n) {
                int a = coord(rng);
                int b = coord(rng);
                s.insert(GridPair{a, b});
            }
        }
    }
    return inst;
}

GridTilingInstance generate_random(int k, int N, double density, std::uint64_t seed) {
    check_params(k, N);
    if (!(density >= 0.0 && density <= 1.0)) throw InvalidParameters("density must lie in [0, 1]");
    GridTilingInstance inst{k, N, {}};
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(density);
    for (int y = 1; y <= k; ++y) {
        for (int x = 1; x <= k; ++x) {
            auto& s = inst.sets[Cell{x, y}];
            for (int a = 1; a <= N; ++a) {
                for (int b = 1; b <= N; ++b) {
                    if (keep(rng)) s.insert(GridPair{a, b});
                }
            }
        }
    }
    return inst;
}

nlohmann::json instance_to_json(const GridTilingInstance& inst) {
    nlohmann::json sets = nlohmann::json::object();
    for (const auto& [cell, pairs] : inst.sets) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& p : pairs) list.push_back({p.a, p.b});
        sets[cell_key(cell)] = std::move(list);
    }
    return {{"k", inst.k}, {"N", inst.N}, {"sets", std::move(sets)}};
}

GridTilingInstance instance_from_json(const nlohmann::json& j) {
    try {
        GridTilingInstance inst;
        inst.k = j.at("k").get<int>();
        inst.N = j.at("N").get<int>();
        for (const auto& [key, list] : j.at("sets").items()) {
            Cell cell;
            char comma = 0;
            std::istringstream is(key);
            if (!(is >> cell.x >> comma >> cell.y) || comma != ',' || !is.eof()) {
                throw ParseError("bad cell key '" + key + "'");
            }
            auto& s = inst.sets[cell];
            for (const auto& p : list) {
                if (!p.is_array() || p.size() != 2) throw ParseError("pairs must be [a, b]");
                s.insert(GridPair{p[0].get<int>(), p[1].get<int>()});
            }
        }
        return inst;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed instance: ") + ex.what());
    }
}

nlohmann::json assignment_to_json(const GTAssignment& asg) {
    nlohmann::json out = nlohmann::json::object();
    for (int y = 1; y <= asg.k(); ++y) {
        for (int x = 1; x <= asg.k(); ++x) out[cell_key({x, y})] = {asg.at(x, y).a, asg.at(x, y).b};
    }
    return out;
}

} // namespace dpath
