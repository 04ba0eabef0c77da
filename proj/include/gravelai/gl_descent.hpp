#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gravelai/confusing_dp.hpp"
#include "gravelai/reward_models.hpp"

namespace gravelai {

/// Which dynamic program answers the most-confusing-parameter queries.
enum class ConfusingEngine { PerSubproblem, Flagged };

struct DescentConfig {
    std::size_t n = 100;
    std::size_t t = 1000;
    std::optional<double> gamma;  // penalty_gamma(instance) when unset
    std::optional<double> step_override;
    ConfusingEngine engine = ConfusingEngine::Flagged;
    bool skip = true;  // subproblem skipping, PerSubproblem engine only
};

struct GLSolution {
    std::vector<double> eta;  // scaled average when certified, raw average otherwise
    double value = 0.0;       // eta^T gaps
    double constraint_value = 0.0;
    double scale_factor = kInf;
    bool certified = false;
    double step = 0.0;
    double gamma = 0.0;
    SolverConstants constants;
};

/// Penalized projected subgradient descent on the rate problem, averaged over t iterates.
GLSolution solve_graves_lai(const Instance& instance, const DescentConfig& config);

struct Feasibility {
    double g_value = 0.0;
    bool feasible = false;
};

inline constexpr double kFeasibilityTolerance = 1e-9;

Feasibility feasibility_check(const Instance& instance, std::span<const double> eta, std::size_t n);

/// Lai-Robbins rates 1 / d_k(mu_k, mu*), zero at the best arm.
std::vector<double> classical_rates(const Instance& instance);

}  // namespace gravelai
