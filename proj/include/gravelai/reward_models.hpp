#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gravelai/tree_graph.hpp"

namespace gravelai {

enum class ModelKind { Gaussian, Bernoulli };

/// Reward family parameterized by its mean. Gaussian models carry either one
/// shared variance or one variance per arm.
class RewardModel {
public:
    static RewardModel gaussian(double variance = 1.0);
    static RewardModel gaussian(std::vector<double> per_arm_variance);
    static RewardModel bernoulli();

    ModelKind kind() const noexcept { return kind_; }
    /// Variance of arm k (Gaussian only). Shared variance applies to every arm.
    double variance(Arm k) const;
    const std::vector<double>& variances() const noexcept { return variances_; }
    bool per_arm() const noexcept { return variances_.size() > 1; }

private:
    RewardModel(ModelKind kind, std::vector<double> variances);

    ModelKind kind_;
    std::vector<double> variances_;
};

/// d_k(mu_k, lambda_k): relative entropy between the reward laws with means mu and lambda.
double divergence(const RewardModel& model, Arm k, double mu, double lambda);

/// Validated problem instance with its derived quantities cached.
class Instance {
public:
    Instance(TreeGraph tree, std::vector<double> mu, std::size_t m, RewardModel model);

    const TreeGraph& tree() const noexcept { return tree_; }
    const std::vector<double>& mu() const noexcept { return mu_; }
    std::size_t m() const noexcept { return m_; }
    const RewardModel& model() const noexcept { return model_; }
    std::size_t arms() const noexcept { return mu_.size(); }

    Arm best() const noexcept { return best_; }
    double mu_max() const noexcept { return mu_max_; }
    double mu_min() const noexcept { return mu_min_; }
    /// Gaps mu* - mu_k; zero at the best arm.
    const std::vector<double>& gaps() const noexcept { return gaps_; }
    const std::vector<Arm>& modes() const noexcept { return modes_; }
    const std::vector<Arm>& neighborhood() const noexcept { return neighborhood_; }
    bool is_mode(Arm k) const { return is_mode_.at(k); }
    bool in_neighborhood(Arm k) const { return in_neighborhood_.at(k); }

    double divergence(Arm k, double lambda) const {
        return gravelai::divergence(model_, k, mu_[k], lambda);
    }

private:
    TreeGraph tree_;
    std::vector<double> mu_;
    std::size_t m_;
    RewardModel model_;

    Arm best_ = 0;
    double mu_max_ = 0.0;
    double mu_min_ = 0.0;
    std::vector<double> gaps_;
    std::vector<Arm> modes_;
    std::vector<Arm> neighborhood_;
    std::vector<bool> is_mode_;
    std::vector<bool> in_neighborhood_;
};

/// Smallest positive gap.
double min_gap(const Instance& instance);

/// Lipschitz constant of lambda -> d(mu, lambda) in l1 norm over [mu_min, mu_max]^K.
double lipschitz_constant(const Instance& instance);

/// Box bound on an optimal rate vector: (1/gap_min) * sum_k gap_k / d_k(mu_k, mu*).
double eta_bound(const Instance& instance);

/// 2 * max_k gap_k / d_k(mu_k, mu*).
double default_gamma(const Instance& instance);

/// 2 * sum_k gap_k / d_k(mu_k, mu*), twice the value of the Lai-Robbins rates.
/// Those rates are always feasible, so this is at least twice the optimal value,
/// which is what the hinge penalty needs to be exact with the certified margin.
double penalty_gamma(const Instance& instance);

struct SolverConstants {
    double discretization = 0.0;  // C: grid error is C / n
    double subgradient = 0.0;     // E: subgradient norm bound
    double descent = 0.0;         // F = sqrt(K) * B * E
    double eta_box = 0.0;         // B
    double lipschitz = 0.0;       // A
};

SolverConstants solver_constants(const Instance& instance, std::size_t n, double gamma);

}  // namespace gravelai
