#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "gravelai/confusing_dp.hpp"
#include "gravelai/reward_models.hpp"

namespace gravelai {

struct OracleBudget {
    std::size_t max_K = 6;
    std::size_t max_n = 8;
    std::size_t max_eta_grid = 40;
    double max_enumeration = 1e7;
};

/// True when lambda is a limit of confusing parameters: lambda at the best arm of mu
/// equals mu*, nothing exceeds mu*, and some other arm k at mu* has the modes of
/// lambda together with k number at most m.
bool is_confusing(const Instance& instance, std::span<const double> lambda);

/// Exhaustive minimum of eta^T d(mu, lambda) over Grid^K together with the
/// single-coordinate vectors mu + (mu* - mu_k) e_k, filtered by `is_confusing`.
Candidate enumerate_confusing(const Instance& instance, std::span<const double> eta, const Grid& grid,
                              const OracleBudget& budget = {});

struct GLGridResult {
    double value = 0.0;
    std::vector<double> eta;
    /// Distance bound from the grid optimum to the optimum over the box.
    double slack = 0.0;
    double step = 0.0;
};

/// Grid search for the rate problem over [0, B]^K with the best arm's rate pinned to 0.
GLGridResult enumerate_gl(const Instance& instance, std::size_t n, const OracleBudget& budget = {});

struct OracleCase {
    Instance instance;
    std::vector<double> eta;
    std::size_t n = 1;
};

/// Random tree with 2..max_K arms, budget m in {2, 3}, rates in [0, 2] and
/// grid size 1..max_n. Means are drawn from a coarse integer lattice half of
/// the time so plateaus and ties below the maximum get exercised.
OracleCase random_oracle_case(std::mt19937_64& rng, std::size_t max_K, std::size_t max_n);

}  // namespace gravelai
