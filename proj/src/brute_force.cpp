#include "gravelai/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gravelai/error.hpp"
#include "gravelai/validate.hpp"

namespace gravelai {

namespace {

void check_budget(const Instance& instance, const Grid& grid, const OracleBudget& budget) {
    const std::size_t K = instance.arms();
    if (K > budget.max_K) {
        throw Error(ErrorCode::BudgetExceeded,
                    "K = " + std::to_string(K) + " exceeds max_K = " + std::to_string(budget.max_K));
    }
    if (grid.size() - 1 > budget.max_n) {
        throw Error(ErrorCode::BudgetExceeded, "grid size exceeds max_n = " + std::to_string(budget.max_n));
    }
    double count = std::pow(static_cast<double>(grid.size()), static_cast<double>(K));
    if (count > budget.max_enumeration) {
        throw Error(ErrorCode::BudgetExceeded, "enumeration of " + std::to_string(count) + " points is too large");
    }
}

// Visits every lambda in Grid^K with lambda[best] = mu*, in lexicographic index order.
template <typename Visit>
void for_each_grid_point(const Instance& instance, const Grid& grid, Visit&& visit) {
    const std::size_t K = instance.arms();
    const std::size_t W = grid.size();
    const Arm best = instance.best();
    std::vector<std::size_t> idx(K, 0);
    idx[best] = grid.top();
    while (true) {
        visit(idx);
        std::size_t pos = K;
        while (pos-- > 0) {
            if (pos == best) {
                continue;
            }
            if (++idx[pos] < W) {
                break;
            }
            idx[pos] = 0;
        }
        if (pos == static_cast<std::size_t>(-1)) {
            return;
        }
    }
}

std::vector<std::vector<double>> trivial_vectors(const Instance& instance) {
    std::vector<std::vector<double>> out;
    for (Arm k = 0; k < instance.arms(); ++k) {
        if (k == instance.best()) {
            continue;
        }
        auto lambda = instance.mu();
        lambda[k] = instance.mu_max();
        out.push_back(std::move(lambda));
    }
    return out;
}

}  // namespace

bool is_confusing(const Instance& instance, std::span<const double> lambda) {
    const Arm best = instance.best();
    const double top = instance.mu_max();
    if (lambda.size() != instance.arms() || lambda[best] != top) {
        return false;
    }
    for (double v : lambda) {
        if (v > top) {
            return false;
        }
    }
    // Strict modes survive small perturbations, so nudging a rival k above mu* gives a
    // parameter with modes(lambda) plus k. That is the closure test.
    auto found = modes(instance.tree(), lambda);
    for (Arm k = 0; k < lambda.size(); ++k) {
        if (k == best || lambda[k] != top) {
            continue;
        }
        const bool counted = std::binary_search(found.begin(), found.end(), k);
        if (found.size() + (counted ? 0 : 1) <= instance.m()) {
            return true;
        }
    }
    return false;
}

Candidate enumerate_confusing(const Instance& instance, std::span<const double> eta, const Grid& grid,
                              const OracleBudget& budget) {
    check_eta(instance, eta);
    check_budget(instance, grid, budget);
    const std::size_t K = instance.arms();

    Candidate best;
    std::vector<double> lambda(K);
    for_each_grid_point(instance, grid, [&](const std::vector<std::size_t>& idx) {
        double cost = 0.0;
        for (Arm k = 0; k < K; ++k) {
            lambda[k] = grid[idx[k]];
            if (eta[k] != 0.0) {
                cost += eta[k] * instance.divergence(k, lambda[k]);
            }
        }
        if (cost < best.value && is_confusing(instance, lambda)) {
            best.value = cost;
            best.lambda = lambda;
        }
    });
    for (const auto& candidate : trivial_vectors(instance)) {
        double cost = objective(instance, eta, candidate);
        if (cost < best.value && is_confusing(instance, candidate)) {
            best.value = cost;
            best.lambda = candidate;
        }
    }
    return best;
}

GLGridResult enumerate_gl(const Instance& instance, std::size_t n, const OracleBudget& budget) {
    const std::size_t K = instance.arms();
    if (K > 3) {
        throw Error(ErrorCode::BudgetExceeded, "rate grid search supports at most 3 arms");
    }
    Grid grid = make_grid(instance, n);
    check_budget(instance, grid, budget);

    // The confusing set does not depend on eta, so collect its divergence vectors once.
    std::vector<std::vector<double>> confusing;
    std::vector<double> lambda(K);
    for_each_grid_point(instance, grid, [&](const std::vector<std::size_t>& idx) {
        for (Arm k = 0; k < K; ++k) {
            lambda[k] = grid[idx[k]];
        }
        if (is_confusing(instance, lambda)) {
            confusing.push_back(divergence_vector(instance, lambda));
        }
    });
    for (const auto& candidate : trivial_vectors(instance)) {
        if (is_confusing(instance, candidate)) {
            confusing.push_back(divergence_vector(instance, candidate));
        }
    }

    const std::size_t G = budget.max_eta_grid;
    const double box = eta_bound(instance);
    GLGridResult out;
    out.step = G > 1 ? box / static_cast<double>(G - 1) : 0.0;
    double gap_l1 = 0.0;
    for (double gap : instance.gaps()) {
        gap_l1 += gap;
    }
    out.slack = out.step * gap_l1;

    bool found = false;
    std::vector<std::size_t> idx(K, 0);
    std::vector<double> eta(K, 0.0);
    while (true) {
        for (Arm k = 0; k < K; ++k) {
            // Exact endpoints: the optimum can sit on the box boundary.
            eta[k] = k == instance.best() || G < 2
                         ? 0.0
                         : box * static_cast<double>(idx[k]) / static_cast<double>(G - 1);
        }
        double value = 0.0;
        for (Arm k = 0; k < K; ++k) {
            value += eta[k] * instance.gaps()[k];
        }
        if (!found || value < out.value) {
            bool feasible = true;
            for (const auto& d : confusing) {
                double g = 0.0;
                for (Arm k = 0; k < K; ++k) {
                    g += eta[k] * d[k];
                }
                if (g < 1.0 - 1e-9) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                found = true;
                out.value = value;
                out.eta = eta;
            }
        }

        std::size_t pos = K;
        while (pos-- > 0) {
            if (pos == instance.best()) {
                continue;
            }
            if (++idx[pos] < G) {
                break;
            }
            idx[pos] = 0;
        }
        if (pos == static_cast<std::size_t>(-1)) {
            break;
        }
    }
    if (!found) {
        throw Error(ErrorCode::NoFeasiblePoint, "no feasible rate on a grid of " + std::to_string(G) +
                                                    " points per axis (step " + std::to_string(out.step) +
                                                    ", slack " + std::to_string(out.slack) + ")");
    }
    return out;
}

OracleCase random_oracle_case(std::mt19937_64& rng, std::size_t max_K, std::size_t max_n) {
    if (max_K < 2 || max_n < 1) {
        throw Error(ErrorCode::InvalidArgument, "random cases need max_K >= 2 and max_n >= 1");
    }
    std::uniform_int_distribution<std::size_t> arms(2, max_K);
    std::uniform_int_distribution<std::size_t> grid(1, max_n);
    std::uniform_int_distribution<std::size_t> budget(2, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> lattice(0, 4);

    const std::size_t K = arms(rng);
    TreeGraph tree = random_tree(K, rng);
    const std::size_t m = budget(rng);
    const bool coarse = unit(rng) < 0.5;
    // Most draws insist on a tight budget with an arm outside the mode neighborhood,
    // which is where the mode-jump candidates live.
    const bool tight = unit(rng) < 0.7;
    std::vector<double> mu(K);
    for (int attempt = 0;; ++attempt) {
        for (double& v : mu) {
            v = coarse ? static_cast<double>(lattice(rng)) : unit(rng);
        }
        double top = *std::max_element(mu.begin(), mu.end());
        if (std::count(mu.begin(), mu.end(), top) != 1) {
            continue;
        }
        auto found = modes(tree, mu);
        if (found.size() > m) {
            continue;
        }
        if (!tight || attempt >= 500) {
            break;
        }
        if (found.size() == m && mode_neighborhood(tree, mu).size() < K) {
            break;
        }
    }
    std::vector<double> eta(K);
    for (double& v : eta) {
        v = unit(rng) < 0.1 ? 0.0 : 2.0 * unit(rng);
    }
    // Cheap arms far from every mode make the mode-jump candidates competitive.
    if (unit(rng) < 0.5) {
        auto hood = mode_neighborhood(tree, mu);
        for (Arm k = 0; k < K; ++k) {
            if (!std::binary_search(hood.begin(), hood.end(), k)) {
                eta[k] *= 0.05;
            }
        }
    }
    const std::size_t n = grid(rng);
    return OracleCase{Instance(std::move(tree), std::move(mu), m, RewardModel::gaussian()), std::move(eta), n};
}

}  // namespace gravelai
