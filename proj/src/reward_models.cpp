#include "gravelai/reward_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gravelai/error.hpp"

namespace gravelai {

namespace {

void require_open_unit(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::DomainError,
                    std::string(what) + " = " + std::to_string(p) + " is outside (0, 1)");
    }
}

// Bernoulli d/dlambda of KL(mu || lambda).
double bernoulli_slope(double mu, double lambda) {
    return (lambda - mu) / (lambda * (1.0 - lambda));
}

void require_nondegenerate(const Instance& instance) {
    if (instance.arms() < 2) {
        throw Error(ErrorCode::DegenerateInstance, "instance has no suboptimal arm");
    }
}

}  // namespace

RewardModel::RewardModel(ModelKind kind, std::vector<double> variances)
    : kind_(kind), variances_(std::move(variances)) {
    for (double v : variances_) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::DomainError, "variance must be positive, got " + std::to_string(v));
        }
    }
}

RewardModel RewardModel::gaussian(double variance) {
    return RewardModel(ModelKind::Gaussian, {variance});
}

RewardModel RewardModel::gaussian(std::vector<double> per_arm_variance) {
    if (per_arm_variance.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty variance list");
    }
    return RewardModel(ModelKind::Gaussian, std::move(per_arm_variance));
}

RewardModel RewardModel::bernoulli() { return RewardModel(ModelKind::Bernoulli, {}); }

double RewardModel::variance(Arm k) const {
    if (kind_ != ModelKind::Gaussian) {
        throw Error(ErrorCode::InvalidArgument, "variance is only defined for Gaussian models");
    }
    if (variances_.size() == 1) {
        return variances_[0];
    }
    return variances_.at(k);
}

double divergence(const RewardModel& model, Arm k, double mu, double lambda) {
    if (model.kind() == ModelKind::Gaussian) {
        double diff = mu - lambda;
        return diff * diff / (2.0 * model.variance(k));
    }
    require_open_unit(mu, "Bernoulli mean");
    require_open_unit(lambda, "Bernoulli mean");
    if (mu == lambda) {
        return 0.0;
    }
    double value = mu * std::log(mu / lambda) + (1.0 - mu) * std::log((1.0 - mu) / (1.0 - lambda));
    return std::max(value, 0.0);
}

Instance::Instance(TreeGraph tree, std::vector<double> mu, std::size_t m, RewardModel model)
    : tree_(std::move(tree)), mu_(std::move(mu)), m_(m), model_(std::move(model)) {
    const std::size_t K = tree_.size();
    if (mu_.size() != K) {
        throw Error(ErrorCode::DimensionMismatch,
                    "tree has " + std::to_string(K) + " arms but mu has " + std::to_string(mu_.size()));
    }
    if (m_ < 1) {
        throw Error(ErrorCode::InvalidArgument, "mode budget m must be at least 1");
    }
    if (model_.kind() == ModelKind::Gaussian && model_.per_arm() && model_.variances().size() != K) {
        throw Error(ErrorCode::DimensionMismatch, "per-arm variance list must have one entry per arm");
    }
    for (double v : mu_) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::DomainError, "mean rewards must be finite");
        }
        if (model_.kind() == ModelKind::Bernoulli) {
            require_open_unit(v, "Bernoulli mean");
        }
    }

    best_ = static_cast<Arm>(std::max_element(mu_.begin(), mu_.end()) - mu_.begin());
    mu_max_ = mu_[best_];
    mu_min_ = *std::min_element(mu_.begin(), mu_.end());
    if (std::count(mu_.begin(), mu_.end(), mu_max_) > 1) {
        throw Error(ErrorCode::TiedMaximum, "the optimal arm must be unique");
    }

    gaps_.resize(K);
    for (Arm k = 0; k < K; ++k) {
        gaps_[k] = mu_max_ - mu_[k];
    }
    modes_ = gravelai::modes(tree_, mu_);
    if (modes_.size() > m_) {
        throw Error(ErrorCode::TooManyModes, std::to_string(modes_.size()) +
                                                 " modes exceed the budget m = " + std::to_string(m_));
    }
    neighborhood_ = mode_neighborhood(tree_, mu_);
    is_mode_.assign(K, false);
    in_neighborhood_.assign(K, false);
    for (Arm k : modes_) {
        is_mode_[k] = true;
    }
    for (Arm k : neighborhood_) {
        in_neighborhood_[k] = true;
    }
}

double min_gap(const Instance& instance) {
    require_nondegenerate(instance);
    double best = INFINITY;
    for (double gap : instance.gaps()) {
        if (gap > 0.0) {
            best = std::min(best, gap);
        }
    }
    return best;
}

double lipschitz_constant(const Instance& instance) {
    const double lo = instance.mu_min();
    const double hi = instance.mu_max();
    const auto& model = instance.model();
    double constant = 0.0;
    for (Arm k = 0; k < instance.arms(); ++k) {
        if (model.kind() == ModelKind::Gaussian) {
            constant = std::max(constant, (hi - lo) / model.variance(k));
        } else {
            // The slope is increasing in lambda, so its modulus peaks at an endpoint.
            require_open_unit(lo, "box endpoint");
            require_open_unit(hi, "box endpoint");
            double mu = instance.mu()[k];
            constant = std::max({constant, std::abs(bernoulli_slope(mu, lo)),
                                 std::abs(bernoulli_slope(mu, hi))});
        }
    }
    return constant;
}

double eta_bound(const Instance& instance) {
    double sum = 0.0;
    for (Arm k = 0; k < instance.arms(); ++k) {
        double gap = instance.gaps()[k];
        if (gap > 0.0) {
            sum += gap / instance.divergence(k, instance.mu_max());
        }
    }
    return sum / min_gap(instance);
}

double default_gamma(const Instance& instance) {
    require_nondegenerate(instance);
    double worst = 0.0;
    for (Arm k = 0; k < instance.arms(); ++k) {
        double gap = instance.gaps()[k];
        if (gap > 0.0) {
            worst = std::max(worst, gap / instance.divergence(k, instance.mu_max()));
        }
    }
    return 2.0 * worst;
}

double penalty_gamma(const Instance& instance) {
    require_nondegenerate(instance);
    double sum = 0.0;
    for (Arm k = 0; k < instance.arms(); ++k) {
        double gap = instance.gaps()[k];
        if (gap > 0.0) {
            sum += gap / instance.divergence(k, instance.mu_max());
        }
    }
    return 2.0 * sum;
}

SolverConstants solver_constants(const Instance& instance, std::size_t n, double gamma) {
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "grid size n must be at least 1");
    }
    if (!(gamma > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "penalty gamma must be positive");
    }
    const double K = static_cast<double>(instance.arms());
    const double range = instance.mu_max() - instance.mu_min();

    SolverConstants out;
    out.eta_box = eta_bound(instance);
    out.lipschitz = lipschitz_constant(instance);

    double gap_norm = 0.0;
    for (double gap : instance.gaps()) {
        gap_norm += gap * gap;
    }
    gap_norm = std::sqrt(gap_norm);

    const auto diameter = static_cast<double>(tree_diameter(instance.tree()));
    out.discretization = diameter * range * out.lipschitz * out.eta_box * K;
    out.subgradient = gap_norm + gamma * std::pow(K, 1.5) * out.lipschitz * range;
    out.descent = std::sqrt(K) * out.eta_box * out.subgradient;
    return out;
}

}  // namespace gravelai
