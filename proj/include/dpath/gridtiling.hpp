#ifndef DPATH_GRIDTILING_HPP
#define DPATH_GRIDTILING_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dpath {

// A pair (a, b) in [N] x [N]. `a` is the first coordinate (grid column q in
// the reduction), `b` the second (grid row l).
struct GridPair {
    int a = 0;
    int b = 0;
    auto operator<=>(const GridPair&) const = default;
};

// Cell (x, y) in [k] x [k]; x indexes left-to-right, y bottom-to-top.
struct Cell {
    int x = 0;
    int y = 0;
    auto operator<=>(const Cell&) const = default;
};

// Grid Tiling with <= constraints: the k^2 sets S_{x,y} subset [N] x [N].
// Cells may be absent after parsing; validate_instance reports it.
struct GridTilingInstance {
    int k = 0;
    int N = 0;
    std::map<Cell, std::set<GridPair>> sets;

    const std::set<GridPair>& at(int x, int y) const;
    bool contains(int x, int y, GridPair p) const;
};

// One chosen pair per cell, stored row-major (x fast).
class GTAssignment {
public:
    GTAssignment() = default;
    explicit GTAssignment(int k) : k_(k), choice_(static_cast<std::size_t>(k) * k) {}

    int k() const { return k_; }
    GridPair& at(int x, int y) { return choice_.at(slot(x, y)); }
    const GridPair& at(int x, int y) const { return choice_.at(slot(x, y)); }

    bool operator==(const GTAssignment&) const = default;

private:
    std::size_t slot(int x, int y) const {
        if (x < 1 || y < 1 || x > k_ || y > k_) throw std::out_of_range("cell outside assignment");
        return static_cast<std::size_t>(y - 1) * k_ + (x - 1);
    }

    int k_ = 0;
    std::vector<GridPair> choice_;
};

struct Violation {
    std::string message;
};

// Empty result means the instance is well formed.
std::vector<Violation> validate_instance(const GridTilingInstance& inst);

// Membership in every S_{x,y}; second coordinates non-decreasing along each
// row (x grows); first coordinates non-decreasing along each column (y grows).
bool check_gt_solution(const GridTilingInstance& inst, const GTAssignment& asg);

struct GtSolveOptions {
    std::uint64_t budget = 10'000'000;
};

// Exhaustive backtracking over cells in row-major order with pruning on the
// partial monotonicity constraints. Returns nullopt iff no solution exists.
// Throws BudgetExceeded once more than `budget` candidate pairs are tried.
std::optional<GTAssignment> solve_gt_brute_force(const GridTilingInstance& inst, GtSolveOptions opts = {});

// Planted monotone assignment (min(y,N), min(x,N)) at every cell plus `noise`
// uniformly drawn extra pairs per cell.
GridTilingInstance generate_planted(int k, int N, int noise, std::uint64_t seed);

// Every pair enters every set independently with probability `density`.
GridTilingInstance generate_random(int k, int N, double density, std::uint64_t seed);

// The assignment generate_planted embeds.
GTAssignment planted_assignment(int k, int N);

// {"k":int,"N":int,"sets":{"x,y":[[a,b],...]}} with 1-based keys.
nlohmann::json instance_to_json(const GridTilingInstance& inst);
GridTilingInstance instance_from_json(const nlohmann::json& j);

nlohmann::json assignment_to_json(const GTAssignment& asg);

} // namespace dpath

#endif
