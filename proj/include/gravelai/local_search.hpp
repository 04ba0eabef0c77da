#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gravelai/reward_models.hpp"

namespace gravelai {

/// delta_k = min over neighbors l of |mu_k - mu_l|. Throws NotAMode.
double min_neighbor_gap(const Instance& instance, Arm k);

struct BoundsReport {
    /// Empty when every arm is in the mode neighborhood (the bound needs an arm outside it).
    std::optional<double> c_loc_lower;
    double c_loc_upper = 0.0;
    double c_lower = 0.0;
    double c_upper = 0.0;
    std::map<Arm, double> delta_per_mode;
    std::vector<double> local_eta;  // zero outside the mode neighborhood
    std::string note;
};

BoundsReport local_search_bounds(const Instance& instance);

/// Every mode k and neighbor l satisfy d_k(mu_k, mu*) <= kappa d_k(mu_k, mu_k - delta_k/2)
/// and d_l(mu_l, mu*) <= kappa d_l(mu_l, mu_k - delta_k/2).
bool is_kappa_peaked(const Instance& instance, double kappa);

/// Gaussian shortcut: gap_k <= delta_k (sqrt(kappa)/2 - 1) at every mode.
bool is_kappa_peaked_gaussian(const Instance& instance, double kappa);

/// The local rates pass the discretized constraint on a grid of n + 1 points.
bool verify_local_eta_feasible(const Instance& instance, std::size_t n);

}  // namespace gravelai
