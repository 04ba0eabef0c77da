#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gravelai/confusing_dp.hpp"
#include "gravelai/reward_models.hpp"

namespace gravelai {

/// Cost of one child subtree under each flag pair, indexed by b + 2c.
using FlagCosts = std::array<double, 4>;

struct FlagChoice {
    double value = kInf;
    int b_child = -1;  // position of the child carrying b, -1 if none
    int c_child = -1;
};

/// Minimizes sum_v phi_v(b_v, c_v) subject to sum b_v = s1 and sum c_v = s2.
/// At most two children carry a flag, so the search is linear in the child count.
FlagChoice fast_flag_min(std::span<const FlagCosts> phi, int s1, int s2);

/// Single-pass DP rooted at the best arm. Covers every way of lifting one arm to mu*
/// while removing one suboptimal mode, in time linear in K for a fixed grid.
class FastConfusingSolver {
public:
    FastConfusingSolver(const Instance& instance, Grid grid);

    const Grid& grid() const noexcept { return grid_; }
    ConfusingResult solve(std::span<const double> eta) const;

private:
    const Instance* instance_;
    Grid grid_;
    DivergenceTable table_;
    RootedTree tree_;
};

ConfusingResult solve_pgl_prime(const Instance& instance, std::span<const double> eta, const Grid& grid);

}  // namespace gravelai
