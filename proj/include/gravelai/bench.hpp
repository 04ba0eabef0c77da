#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gravelai/gl_descent.hpp"
#include "gravelai/reward_models.hpp"

namespace gravelai {

struct Timing {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Wall time of `work` over `reps` repetitions after one untimed warm-up call, in seconds.
Timing time_repeated(std::size_t reps, const std::function<void(std::size_t)>& work);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Kernel-sum instance with `m` modes spread over the tree, best arm first. Halves sigma
/// until the requested modes survive.
Instance spread_instance(const TreeGraph& tree, std::size_t m, double sigma);

struct ScalingRow {
    std::size_t K = 0;
    Timing time;
};

struct ScalingParams {
    std::vector<std::size_t> ks{10, 20, 40};
    std::size_t m = 2;
    std::size_t n = 50;
    std::size_t t = 20;
    std::size_t reps = 5;
    double sigma = 2.0;
    ConfusingEngine engine = ConfusingEngine::PerSubproblem;
    // Off by default: skipping prunes a size-dependent share of subproblems, which bends the
    // small-K end of the curve away from the K^2 cost of the plain algorithm.
    bool skip = false;
};

/// Full descent on line graphs of each size. Sizes below 2 are skipped.
std::vector<ScalingRow> scaling_benchmark(const ScalingParams& params);

enum class TreeFamily { Balanced, Random };

struct DpCompareRow {
    TreeFamily family = TreeFamily::Balanced;
    std::size_t parameter = 0;  // branching factor, or arm count for random trees
    std::size_t K = 0;
    Timing original;
    Timing fast;
};

struct DpCompareParams {
    std::vector<std::size_t> branching{2, 6, 10};
    std::size_t height = 3;
    std::vector<std::size_t> random_sizes;
    std::size_t n = 100;
    std::size_t m = 3;
    std::size_t reps = 5;
    double sigma = 2.0;
    std::uint64_t seed = 1;
    bool skip = true;
};

/// One most-confusing query per repetition, eta uniform on [0, 1]^K. Balanced trees first, then
/// uniform random trees of each requested size.
std::vector<DpCompareRow> dp_compare_benchmark(const DpCompareParams& params);

}  // namespace gravelai
