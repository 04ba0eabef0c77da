#include <algorithm>
#include <random>

#include "doctest.h"
#include "gravelai/error.hpp"
#include "gravelai/tree_graph.hpp"

using namespace gravelai;

namespace {

TreeGraph binary_height_two() { return build_tree(7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}}); }

std::vector<Arm> scan_modes(const TreeGraph& tree, const std::vector<double>& mu) {
    std::vector<Arm> out;
    for (Arm k = 0; k < tree.size(); ++k) {
        bool strict = true;
        for (const auto& [a, b] : tree.edges()) {
            if ((a == k && mu[b] >= mu[k]) || (b == k && mu[a] >= mu[k])) {
                strict = false;
            }
        }
        if (strict) {
            out.push_back(k);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("build_tree validates structure") {
    CHECK(build_tree(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}).size() == 5);
    CHECK(build_tree(1, {}).size() == 1);
    CHECK(binary_height_two().degree(0) == 2);

    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::EmptyInput;
    };
    CHECK(code_of([] { build_tree(3, {{0, 1}}); }) == ErrorCode::NotATree);
    CHECK(code_of([] { build_tree(4, {{0, 1}, {1, 0}, {2, 3}}); }) == ErrorCode::NotATree);
    CHECK(code_of([] { build_tree(4, {{0, 1}, {0, 2}, {1, 2}}); }) == ErrorCode::NotATree);
    CHECK(code_of([] { build_tree(3, {{0, 1}, {1, 3}}); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([] { build_tree(2, {{1, 1}}); }) == ErrorCode::NotATree);
    CHECK(code_of([] { build_tree(0, {}); }) == ErrorCode::NotATree);
}

TEST_CASE("root_at on a line is a chain") {
    auto rooted = root_at(line_tree(5), 0);
    for (Arm k = 0; k < 4; ++k) {
        REQUIRE(rooted.children(k).size() == 1);
        CHECK(rooted.children(k)[0] == k + 1);
    }
    CHECK(rooted.is_leaf(4));
    CHECK_FALSE(rooted.parent(0).has_value());
    CHECK(rooted.postorder().back() == 0);

    auto single = root_at(build_tree(1, {}), 0);
    CHECK(single.is_leaf(0));
    CHECK_THROWS_AS(root_at(line_tree(3), 3), Error);
}

TEST_CASE("rooting any tree at any node gives a consistent orientation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto tree = trial == 0 ? binary_height_two() : random_tree(1 + trial % 15, rng);
        for (Arm root = 0; root < tree.size(); ++root) {
            auto rooted = root_at(tree, root);
            std::vector<int> position(tree.size());
            auto post = rooted.postorder();
            REQUIRE(post.size() == tree.size());
            for (std::size_t i = 0; i < post.size(); ++i) {
                position[post[i]] = static_cast<int>(i);
            }
            std::size_t child_links = 0;
            for (Arm k = 0; k < tree.size(); ++k) {
                if (k == root) {
                    CHECK_FALSE(rooted.parent(k).has_value());
                } else {
                    REQUIRE(rooted.parent(k).has_value());
                    CHECK(tree.adjacent(k, *rooted.parent(k)));
                }
                auto kids = rooted.children(k);
                CHECK(std::is_sorted(kids.begin(), kids.end()));
                for (Arm c : kids) {
                    CHECK(rooted.parent(c) == k);
                    CHECK(position[c] < position[k]);
                }
                child_links += kids.size();
            }
            CHECK(child_links == tree.size() - 1);
            CHECK(rooted.descendants(root).size() + 1 == tree.size());
        }
    }
}

TEST_CASE("modes and neighborhood on the five-arm line") {
    auto tree = line_tree(5);
    std::vector<double> mu{1, 2, 4, 2, 3};
    CHECK(modes(tree, mu) == std::vector<Arm>{2, 4});
    CHECK(mode_neighborhood(tree, mu) == std::vector<Arm>{1, 2, 3, 4});
    CHECK(is_at_most_m_modal(tree, mu, 2));
    CHECK_FALSE(is_at_most_m_modal(tree, mu, 1));
    CHECK(modes(tree, std::vector<double>(5, 1.5)).empty());
    CHECK_THROWS_AS(modes(tree, std::vector<double>{1, 2}), Error);
}

TEST_CASE("star center is the only mode and covers every arm") {
    auto star = build_tree(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    std::vector<double> mu{9, 1, 2, 3, 4};
    CHECK(modes(star, mu) == std::vector<Arm>{0});
    CHECK(mode_neighborhood(star, mu).size() == 5);
}

TEST_CASE("modes match a definition-level scan on random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> level(0, 3);
    for (int trial = 0; trial < 100; ++trial) {
        auto tree = random_tree(1 + trial % 12, rng);
        std::vector<double> mu(tree.size());
        for (double& v : mu) {
            v = level(rng);
        }
        auto expected = scan_modes(tree, mu);
        CHECK(modes(tree, mu) == expected);

        std::vector<Arm> hood = expected;
        for (Arm k : expected) {
            for (Arm l : tree.neighbors(k)) {
                hood.push_back(l);
            }
        }
        std::sort(hood.begin(), hood.end());
        hood.erase(std::unique(hood.begin(), hood.end()), hood.end());
        CHECK(mode_neighborhood(tree, mu) == hood);
        CHECK(is_at_most_m_modal(tree, mu, tree.size()));

        auto best = std::max_element(mu.begin(), mu.end());
        if (std::count(mu.begin(), mu.end(), *best) == 1) {
            CHECK_FALSE(expected.empty());
        }
    }
}

TEST_CASE("graph metrics") {
    auto line = graph_metrics(line_tree(5));
    CHECK(line.diameter == 4);
    CHECK(line.max_degree == 2);
    auto binary = graph_metrics(binary_height_two());
    CHECK(binary.diameter == 4);
    CHECK(binary.max_degree == 3);
    CHECK(binary.distances[3][6] == 4);
    auto single = graph_metrics(build_tree(1, {}));
    CHECK(single.diameter == 0);
    CHECK(single.max_degree == 0);

    std::mt19937_64 rng(3);
    auto tree = random_tree(20, rng);
    auto metrics = graph_metrics(tree);
    CHECK(tree_diameter(tree) == metrics.diameter);
    for (Arm a = 0; a < 20; ++a) {
        CHECK(metrics.distances[a][a] == 0);
        for (Arm b = 0; b < 20; ++b) {
            CHECK(metrics.distances[a][b] == metrics.distances[b][a]);
            for (Arm c = 0; c < 20; ++c) {
                CHECK(metrics.distances[a][c] <= metrics.distances[a][b] + metrics.distances[b][c]);
            }
        }
    }
}

TEST_CASE("balanced tree numbering is breadth first") {
    auto tree = balanced_tree(3, 2);
    CHECK(tree.size() == 13);
    CHECK(tree.adjacent(0, 1));
    CHECK(tree.adjacent(0, 3));
    CHECK(tree.adjacent(1, 4));
    CHECK(tree.adjacent(3, 12));
    CHECK(balanced_tree(2, 2).edges() == binary_height_two().edges());
}
