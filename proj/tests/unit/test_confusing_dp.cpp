#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "gravelai/brute_force.hpp"
#include "gravelai/confusing_dp.hpp"
#include "gravelai/error.hpp"
#include "gravelai/fast_confusing_dp.hpp"

using namespace gravelai;

namespace {

void check_invariants(const Instance& inst, const ConfusingResult& r) {
    REQUIRE(r.lambda.size() == inst.arms());
    CHECK(is_confusing(inst, r.lambda));
}

}  // namespace

TEST_CASE("grid endpoints and spacing") {
    auto inst = fixtures::line_five();
    auto grid = make_grid(inst, 4);
    CHECK(grid.values == std::vector<double>{1, 1.75, 2.5, 3.25, 4});
    CHECK(make_grid(inst, 1).values == std::vector<double>{1, 4});
    for (std::size_t n : {3, 7, 100, 2000}) {
        auto g = make_grid(inst, n);
        CHECK(g.size() == n + 1);
        CHECK(g.values.front() == 1.0);
        CHECK(g.values.back() == 4.0);
        CHECK(std::is_sorted(g.values.begin(), g.values.end()));
    }
    auto upper = make_grid(inst, 4, false);
    CHECK(upper.values == std::vector<double>{1.75, 2.5, 3.25, 4});
    CHECK_THROWS_AS(make_grid(inst, 0), Error);
}

TEST_CASE("single-coordinate candidates") {
    auto inst = fixtures::line_five();
    auto eta = fixtures::line_five_eta();
    auto five = trivial_value(inst, eta, 4);
    CHECK(five.value == 0.5);
    CHECK(five.lambda == std::vector<double>{1, 2, 4, 2, 4});
    CHECK(trivial_value(inst, eta, 1).value == 0.5);
    CHECK(trivial_value(inst, eta, 3).value == 0.5);
    std::vector<double> zero_at_two = eta;
    zero_at_two[1] = 0.0;
    CHECK(trivial_value(inst, zero_at_two, 1).value == 0.0);
    CHECK_THROWS_AS(trivial_value(inst, eta, 0), Error);
    CHECK_THROWS_AS(trivial_value(inst, eta, 2), Error);
}

TEST_CASE("worked example: mode jump beats every single-coordinate move") {
    auto inst = fixtures::line_five();
    auto eta = fixtures::line_five_eta();
    ConfusingSolver solver(inst, make_grid(inst, 2000));
    REQUIRE(solver.subproblems().size() == 1);

    auto sub = solver.solve_subproblem(eta, 0, 4);
    CHECK(sub.value == doctest::Approx(0.145).epsilon(0.01 / 0.145));
    std::vector<double> expected{4, 2, 4, 2.8, 2.8};
    for (Arm k = 0; k < 5; ++k) {
        CHECK(std::abs(sub.lambda[k] - expected[k]) <= 0.05);
    }
    CHECK(objective(inst, eta, sub.lambda) == doctest::Approx(sub.value).epsilon(1e-12));

    auto result = solver.most_confusing(eta);
    CHECK(result.witness.kind == WitnessKind::Subproblem);
    CHECK(result.witness.k == 0);
    CHECK(result.witness.k_prime == 4);
    CHECK(result.value == sub.value);
    check_invariants(inst, result);
}

TEST_CASE("a top plateau that would need an extra mode is not confusing") {
    // Raising arms 0 and 1 together ties them, but any nudge above mu* makes a third mode.
    TreeGraph tree(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}});
    Instance inst(tree, {2, 2, 1, 2, 1, 4}, 2, RewardModel::gaussian());
    CHECK_FALSE(is_confusing(inst, std::vector<double>{4, 4, 1, 2.5, 1, 4}));
    CHECK(is_confusing(inst, std::vector<double>{4, 4, 1, 1, 1, 4}));
    std::vector<double> eta{0.01, 0.01, 1, 1, 1, 0};
    auto grid = make_grid(inst, 6);
    auto oracle = enumerate_confusing(inst, eta, grid);
    auto result = most_confusing(inst, eta, grid);
    CHECK(result.value == oracle.value);
    CHECK(solve_pgl_prime(inst, eta, grid).value == oracle.value);
    check_invariants(inst, result);

    Instance uni(line_tree(4), {0.016, 0.047, 0.087, 0.221}, 1, RewardModel::gaussian());
    CHECK_FALSE(is_confusing(uni, std::vector<double>{0.221, 0.221, 0.085, 0.221}));
    CHECK(is_confusing(uni, std::vector<double>{0.016, 0.047, 0.221, 0.221}));
}

TEST_CASE("zero rates give a zero-cost confusing parameter") {
    auto inst = fixtures::line_five();
    std::vector<double> eta(5, 0.0);
    auto grid = make_grid(inst, 10);
    auto sub = solve_subproblem(inst, eta, grid, 0, 4);
    CHECK(sub.value == 0.0);
    CHECK(is_confusing(inst, sub.lambda));
    auto r = most_confusing(inst, eta, grid);
    CHECK(r.value == 0.0);
    check_invariants(inst, r);
}

TEST_CASE("slack mode budget uses the single-coordinate scan") {
    Instance inst(line_tree(3), {1, 0, 0.5}, 2, RewardModel::gaussian());
    std::vector<double> eta{0, 1, 1};
    auto r = most_confusing(inst, eta, make_grid(inst, 8));
    CHECK(r.value == doctest::Approx(0.125));
    CHECK(r.witness.kind == WitnessKind::Trivial);
    CHECK(r.witness.k == 2);
    CHECK(r.lambda == std::vector<double>{1, 0, 1});
}

TEST_CASE("subproblem preconditions") {
    auto inst = fixtures::line_five();
    auto eta = fixtures::line_five_eta();
    auto grid = make_grid(inst, 4);
    CHECK_THROWS_AS(solve_subproblem(inst, eta, grid, 1, 4), Error);
    CHECK_THROWS_AS(solve_subproblem(inst, eta, grid, 0, 2), Error);
    CHECK_THROWS_AS(solve_subproblem(inst, eta, grid, 0, 3), Error);
    CHECK_THROWS_AS(most_confusing(inst, std::vector<double>{1, 1}, grid), Error);
    CHECK_THROWS_AS(most_confusing(inst, std::vector<double>{1, 1, -1, 1, 1}, grid), Error);
}

TEST_CASE("homogeneity, monotonicity and skip transparency") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        auto c = random_oracle_case(rng, 9, 12);
        ConfusingSolver solver(c.instance, make_grid(c.instance, c.n));
        auto base = solver.most_confusing(c.eta);
        check_invariants(c.instance, base);

        auto unskipped = solver.most_confusing(c.eta, {.skip = false});
        CHECK(unskipped.value == base.value);

        for (double scale : {0.5, 3.0}) {
            std::vector<double> scaled = c.eta;
            for (double& v : scaled) {
                v *= scale;
            }
            CHECK(solver.most_confusing(scaled).value == doctest::Approx(scale * base.value).epsilon(1e-12));
        }

        std::vector<double> bumped = c.eta;
        bumped[trial % bumped.size()] += unit(rng);
        CHECK(solver.most_confusing(bumped).value >= base.value - 1e-12);
    }
}

TEST_CASE("uniform scaling keeps the witness on the worked example") {
    auto inst = fixtures::line_five();
    auto eta = fixtures::line_five_eta();
    auto grid = make_grid(inst, 200);
    auto a = most_confusing(inst, eta, grid);
    for (double& v : eta) {
        v *= 4.0;
    }
    auto b = most_confusing(inst, eta, grid);
    CHECK(b.value == doctest::Approx(4.0 * a.value));
    CHECK(b.lambda == a.lambda);
    CHECK(b.witness.k == a.witness.k);
}
