#include "gravelai/local_search.hpp"

#include <algorithm>
#include <cmath>

#include "gravelai/error.hpp"
#include "gravelai/confusing_dp.hpp"
#include "gravelai/gl_descent.hpp"

namespace gravelai {

double min_neighbor_gap(const Instance& instance, Arm k) {
    if (k >= instance.arms() || !instance.is_mode(k)) {
        throw Error(ErrorCode::NotAMode, "arm " + std::to_string(k) + " is not a mode");
    }
    const auto& mu = instance.mu();
    double gap = kInf;
    for (Arm l : instance.tree().neighbors(k)) {
        gap = std::min(gap, std::abs(mu[k] - mu[l]));
    }
    return gap;
}

BoundsReport local_search_bounds(const Instance& instance) {
    const auto& mu = instance.mu();
    const auto& gaps = instance.gaps();
    const double top = instance.mu_max();
    const Arm best = instance.best();
    const std::size_t K = instance.arms();

    BoundsReport out;
    out.local_eta.assign(K, 0.0);
    for (Arm k : instance.modes()) {
        out.delta_per_mode[k] = min_neighbor_gap(instance, k);
    }

    double loc_lower = 0.0;
    for (Arm k = 0; k < K; ++k) {
        if (k == best) {
            continue;
        }
        const double trivial = gaps[k] / instance.divergence(k, top);
        out.c_upper += trivial;
        if (instance.in_neighborhood(k)) {
            out.c_lower += trivial;
        }
    }
    for (auto [k, delta] : out.delta_per_mode) {
        const double half = mu[k] - delta / 2.0;
        if (k != best) {
            loc_lower += gaps[k] / instance.divergence(k, mu[k] - delta);
            out.c_loc_upper += gaps[k] / instance.divergence(k, half);
            out.local_eta[k] = std::max(out.local_eta[k], std::max(1.0 / instance.divergence(k, top),
                                                                   1.0 / instance.divergence(k, half)));
        }
        for (Arm l : instance.tree().neighbors(k)) {
            out.c_loc_upper += gaps[l] / instance.divergence(l, half);
            out.local_eta[l] = std::max(out.local_eta[l], std::max(1.0 / instance.divergence(l, top),
                                                                   1.0 / instance.divergence(l, half)));
        }
    }
    if (instance.neighborhood().size() < K) {
        out.c_loc_lower = loc_lower;
    } else {
        out.note = "every arm is a mode or next to one; no lower bound on local strategies";
    }
    return out;
}

bool is_kappa_peaked(const Instance& instance, double kappa) {
    if (!(kappa > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
    }
    const auto& mu = instance.mu();
    const double top = instance.mu_max();
    for (Arm k : instance.modes()) {
        const double half = mu[k] - min_neighbor_gap(instance, k) / 2.0;
        if (instance.divergence(k, top) > kappa * instance.divergence(k, half)) {
            return false;
        }
        for (Arm l : instance.tree().neighbors(k)) {
            if (instance.divergence(l, top) > kappa * instance.divergence(l, half)) {
                return false;
            }
        }
    }
    return true;
}

bool is_kappa_peaked_gaussian(const Instance& instance, double kappa) {
    if (instance.model().kind() != ModelKind::Gaussian) {
        throw Error(ErrorCode::NotApplicable, "the closed form holds for Gaussian rewards only");
    }
    const double factor = std::sqrt(kappa) / 2.0 - 1.0;
    for (Arm k : instance.modes()) {
        if (instance.gaps()[k] > min_neighbor_gap(instance, k) * factor) {
            return false;
        }
    }
    return true;
}

bool verify_local_eta_feasible(const Instance& instance, std::size_t n) {
    return feasibility_check(instance, local_search_bounds(instance).local_eta, n).feasible;
}

}  // namespace gravelai
