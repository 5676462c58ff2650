#include <doctest.h>

#include "dpath/errors.hpp"
#include "dpath/gridtiling.hpp"
#include "oracles.hpp"

using namespace dpath;

namespace {

GridTilingInstance make(int k, int N, std::map<Cell, std::set<GridPair>> sets) {
    return GridTilingInstance{k, N, std::move(sets)};
}

GridTilingInstance uniform(int k, int N, std::set<GridPair> s) {
    GridTilingInstance inst{k, N, {}};
    for (int x = 1; x <= k; ++x) {
        for (int y = 1; y <= k; ++y) inst.sets[{x, y}] = s;
    }
    return inst;
}

} // namespace

TEST_CASE("validate_instance") {
    CHECK(validate_instance(make(1, 2, {{{1, 1}, {{1, 1}}}})).empty());

    auto out_of_range = validate_instance(make(1, 2, {{{1, 1}, {{3, 1}}}}));
    REQUIRE(out_of_range.size() == 1);
    CHECK(out_of_range[0].message.find("(3,1)") != std::string::npos);

    auto missing = validate_instance(make(2, 2, {{{1, 1}, {}}, {{2, 1}, {}}, {{1, 2}, {}}}));
    REQUIRE(missing.size() == 1);
    CHECK(missing[0].message.find("2,2") != std::string::npos);

    CHECK_FALSE(validate_instance(uniform(1, 1, {{1, 1}})).empty());
    CHECK_FALSE(validate_instance(uniform(0, 2, {})).empty());
}

TEST_CASE("check_gt_solution") {
    GTAssignment one(1);
    one.at(1, 1) = {2, 1};
    CHECK(check_gt_solution(make(1, 2, {{{1, 1}, {{2, 1}}}}), one));

    auto ones = uniform(2, 3, {{1, 1}});
    GTAssignment constant(2);
    for (int x = 1; x <= 2; ++x) {
        for (int y = 1; y <= 2; ++y) constant.at(x, y) = {1, 1};
    }
    CHECK(check_gt_solution(ones, constant));

    auto inst = uniform(2, 3, {{1, 1}, {2, 2}});
    GTAssignment bad(2);
    bad.at(1, 1) = {2, 2};
    bad.at(2, 1) = {1, 1};
    bad.at(1, 2) = {2, 2};
    bad.at(2, 2) = {2, 2};
    CHECK_FALSE(check_gt_solution(inst, bad));

    SUBCASE("column condition uses first coordinates") {
        auto col = uniform(2, 3, {{1, 1}, {2, 1}, {1, 2}});
        GTAssignment asg(2);
        asg.at(1, 1) = {2, 1};
        asg.at(2, 1) = {2, 1};
        asg.at(1, 2) = {1, 2};
        asg.at(2, 2) = {2, 1};
        CHECK_FALSE(check_gt_solution(col, asg));
        asg.at(1, 2) = {2, 1};
        CHECK(check_gt_solution(col, asg));
    }

    SUBCASE("membership") {
        GTAssignment outside(1);
        outside.at(1, 1) = {1, 2};
        CHECK_FALSE(check_gt_solution(make(1, 2, {{{1, 1}, {{2, 1}}}}), outside));
    }
}

TEST_CASE("solve_gt_brute_force examples") {
    CHECK_FALSE(solve_gt_brute_force(make(1, 2, {{{1, 1}, {}}})).has_value());

    auto full = uniform(2, 2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    auto sol = solve_gt_brute_force(full);
    REQUIRE(sol);
    CHECK(check_gt_solution(full, *sol));

    // Only one combined choice exists; row y=1 needs 3 <= 1.
    auto inst = make(2, 3, {{{1, 1}, {{1, 3}}}, {{2, 1}, {{2, 1}}}, {{1, 2}, {{2, 2}}}, {{2, 2}, {{3, 2}}}});
    CHECK_FALSE(oracle::gt_feasible(inst));
    CHECK_FALSE(solve_gt_brute_force(inst).has_value());
}

TEST_CASE("solve_gt_brute_force budget") {
    auto inst = generate_random(3, 5, 0.3, 11);
    CHECK_THROWS_AS(solve_gt_brute_force(inst, GtSolveOptions{3}), BudgetExceeded);
}

TEST_CASE("solver agrees with full enumeration") {
    int feasible = 0;
    int total = 0;
    for (int k : {1, 2}) {
        for (int N : {2, 3}) {
            for (double density : {0.2, 0.4, 0.6, 0.8}) {
                for (std::uint64_t seed = 0; seed < 10; ++seed) {
                    auto inst = generate_random(k, N, density, seed);
                    auto sol = solve_gt_brute_force(inst);
                    CAPTURE(k);
                    CAPTURE(N);
                    CAPTURE(density);
                    CAPTURE(seed);
                    CHECK(sol.has_value() == oracle::gt_feasible(inst));
                    if (sol) {
                        CHECK(check_gt_solution(inst, *sol));
                        ++feasible;
                    }
                    ++total;
                }
            }
        }
    }
    // Both answers occur, so the comparison is not vacuous.
    CHECK(feasible > 0);
    CHECK(feasible < total);
}

TEST_CASE("generate_planted") {
    auto small = generate_planted(2, 3, 0, 7);
    CHECK(solve_gt_brute_force(small).has_value());
    CHECK(check_gt_solution(small, planted_assignment(2, 3)));

    auto noisy = generate_planted(3, 5, 3, 1);
    for (const auto& [cell, s] : noisy.sets) {
        CHECK(s.size() >= 1);
        CHECK(s.size() <= 4);
    }
    CHECK(check_gt_solution(noisy, planted_assignment(3, 5)));
    CHECK(oracle::gt_feasible(noisy));
    CHECK(solve_gt_brute_force(noisy).has_value());

    auto single = generate_planted(1, 2, 0, 0);
    REQUIRE(single.sets.size() == 1);
    CHECK(single.at(1, 1).size() == 1);

    CHECK(planted_assignment(4, 2).at(3, 4) == GridPair{2, 2});
    CHECK(planted_assignment(4, 5).at(3, 1) == GridPair{1, 3});
}

TEST_CASE("generate_random") {
    auto full = generate_random(2, 3, 1.0, 5);
    for (const auto& [cell, s] : full.sets) CHECK(s.size() == 9);
    CHECK(solve_gt_brute_force(full).has_value());

    auto empty = generate_random(2, 3, 0.0, 5);
    for (const auto& [cell, s] : empty.sets) CHECK(s.empty());
    CHECK_FALSE(solve_gt_brute_force(empty).has_value());

    auto some = generate_random(2, 3, 0.4, 42);
    CHECK(validate_instance(some).empty());
    CHECK(solve_gt_brute_force(some).has_value() == oracle::gt_feasible(some));
}

TEST_CASE("generators are deterministic in their seed") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CHECK(generate_random(3, 4, 0.5, seed).sets == generate_random(3, 4, 0.5, seed).sets);
        CHECK(generate_planted(3, 4, 2, seed).sets == generate_planted(3, 4, 2, seed).sets);
    }
    CHECK(generate_random(3, 4, 0.5, 1).sets != generate_random(3, 4, 0.5, 2).sets);
}

TEST_CASE("planted with zero noise is always solvable") {
    for (int k = 1; k <= 3; ++k) {
        for (int N = 2; N <= 5; ++N) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                CHECK(solve_gt_brute_force(generate_planted(k, N, 0, seed)).has_value());
            }
        }
    }
}

TEST_CASE("instance JSON round trip") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto inst = generate_random(3, 4, 0.5, seed);
        auto back = instance_from_json(instance_to_json(inst));
        CHECK(back.k == inst.k);
        CHECK(back.N == inst.N);
        CHECK(back.sets == inst.sets);
    }
    auto j = instance_to_json(make(1, 2, {{{1, 1}, {{2, 1}}}}));
    CHECK(j["sets"]["1,1"] == nlohmann::json::array({nlohmann::json::array({2, 1})}));
    CHECK_THROWS_AS(instance_from_json(nlohmann::json{{"k", "two"}}), ParseError);
}
