#include "gravelai/gl_descent.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <memory>

#include "gravelai/error.hpp"
#include "gravelai/fast_confusing_dp.hpp"
#include "gravelai/validate.hpp"

namespace gravelai {

namespace {

using Oracle = std::function<ConfusingResult(std::span<const double>)>;

Oracle make_oracle(const Instance& instance, Grid grid, ConfusingEngine engine, bool skip) {
    if (engine == ConfusingEngine::Flagged) {
        auto solver = std::make_shared<FastConfusingSolver>(instance, std::move(grid));
        return [solver](std::span<const double> eta) { return solver->solve(eta); };
    }
    auto solver = std::make_shared<ConfusingSolver>(instance, std::move(grid));
    return [solver, skip](std::span<const double> eta) { return solver->most_confusing(eta, {skip}); };
}

}  // namespace

GLSolution solve_graves_lai(const Instance& instance, const DescentConfig& config) {
    if (config.n < 1 || config.t < 1) {
        throw Error(ErrorCode::InvalidArgument, "descent needs n >= 1 and t >= 1");
    }
    const double gamma = config.gamma.value_or(penalty_gamma(instance));
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw Error(ErrorCode::InvalidArgument, "gamma must be positive and finite");
    }
    if (config.step_override && !(*config.step_override > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "step override must be positive");
    }

    const std::size_t K = instance.arms();
    const auto& gaps = instance.gaps();
    GLSolution out;
    out.gamma = gamma;
    out.constants = solver_constants(instance, config.n, gamma);
    const double t = static_cast<double>(config.t);
    out.step = config.step_override.value_or(std::sqrt(static_cast<double>(K)) * out.constants.eta_box /
                                             (std::sqrt(t) * out.constants.subgradient));

    Oracle oracle = make_oracle(instance, make_grid(instance, config.n), config.engine, config.skip);

    std::vector<double> eta(K, 0.0);
    std::vector<double> sum(K, 0.0);  // eta(1) = 0 adds nothing
    for (std::size_t s = 1; s < config.t; ++s) {
        ConfusingResult confusing = oracle(eta);
        const bool violated = confusing.value < 1.0;
        for (Arm k = 0; k < K; ++k) {
            double grad = gaps[k];
            if (violated) {
                grad -= gamma * instance.divergence(k, confusing.lambda[k]);
            }
            eta[k] = std::max(0.0, eta[k] - out.step * grad);
            sum[k] += eta[k];
        }
        eta[instance.best()] = 0.0;
        sum[instance.best()] = 0.0;
    }

    const double slack = out.constants.discretization / static_cast<double>(config.n) +
                         2.0 * out.constants.descent / (gamma * std::sqrt(t));
    out.certified = slack < 1.0;
    out.scale_factor = out.certified ? 1.0 / (1.0 - slack) : kInf;
    const double weight = (out.certified ? out.scale_factor : 1.0) / t;
    out.eta.resize(K);
    for (Arm k = 0; k < K; ++k) {
        out.eta[k] = sum[k] * weight;
        out.value += out.eta[k] * gaps[k];
    }
    out.constraint_value = oracle(out.eta).value;
    return out;
}

Feasibility feasibility_check(const Instance& instance, std::span<const double> eta, std::size_t n) {
    check_eta(instance, eta);
    Feasibility out;
    out.g_value = FastConfusingSolver(instance, make_grid(instance, n)).solve(eta).value;
    out.feasible = out.g_value >= 1.0 - kFeasibilityTolerance;
    return out;
}

std::vector<double> classical_rates(const Instance& instance) {
    std::vector<double> eta(instance.arms(), 0.0);
    for (Arm k = 0; k < instance.arms(); ++k) {
        if (k != instance.best()) {
            eta[k] = 1.0 / instance.divergence(k, instance.mu_max());
        }
    }
    return eta;
}

}  // namespace gravelai
