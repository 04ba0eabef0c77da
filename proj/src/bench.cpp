#include "gravelai/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "gravelai/confusing_dp.hpp"
#include "gravelai/error.hpp"
#include "gravelai/fast_confusing_dp.hpp"
#include "gravelai/simulator.hpp"

namespace gravelai {

Timing time_repeated(std::size_t reps, const std::function<void(std::size_t)>& work) {
    if (reps == 0) {
        throw Error(ErrorCode::InvalidArgument, "at least one repetition is required");
    }
    Timing out{0.0, kInf, 0.0};
    work(0);  // warm caches and allocations
    for (std::size_t r = 0; r < reps; ++r) {
        auto start = std::chrono::steady_clock::now();
        work(r);
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.mean += seconds;
        out.min = std::min(out.min, seconds);
        out.max = std::max(out.max, seconds);
    }
    out.mean /= static_cast<double>(reps);
    return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "a slope needs at least two paired points");
    }
    const double count = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw Error(ErrorCode::DomainError, "log-log regression needs positive values");
        }
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "x values must not all be equal");
    }
    return (count * sxy - sx * sy) / denom;
}

Instance spread_instance(const TreeGraph& tree, std::size_t m, double sigma) {
    auto chosen = spread_modes(tree, m);
    for (int attempt = 0; attempt < 40; ++attempt, sigma /= 2.0) {
        try {
            return generate_instance(tree, chosen, chosen.front(), sigma);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ModesNotRealized) {
                throw;
            }
        }
    }
    throw Error(ErrorCode::ModesNotRealized, "could not place the requested modes on this tree");
}

std::vector<ScalingRow> scaling_benchmark(const ScalingParams& params) {
    std::vector<ScalingRow> rows;
    for (std::size_t K : params.ks) {
        if (K < 2) {
            continue;
        }
        auto tree = line_tree(K);
        Instance instance = spread_instance(tree, std::min(params.m, K), params.sigma);
        DescentConfig config;
        config.n = params.n;
        config.t = params.t;
        config.engine = params.engine;
        config.skip = params.skip;
        rows.push_back({K, time_repeated(params.reps, [&](std::size_t) { solve_graves_lai(instance, config); })});
    }
    return rows;
}

namespace {

DpCompareRow compare_on(const TreeGraph& tree, const DpCompareParams& params, std::mt19937_64& rng) {
    const std::size_t K = tree.size();
    Instance instance = spread_instance(tree, std::min(params.m, K), params.sigma);
    Grid grid = make_grid(instance, params.n);
    ConfusingSolver original(instance, grid);
    FastConfusingSolver fast(instance, grid);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> etas(params.reps, std::vector<double>(K));
    for (auto& eta : etas) {
        for (double& v : eta) {
            v = unit(rng);
        }
    }
    ConfusingOptions options{params.skip};
    DpCompareRow row;
    row.K = K;
    row.original = time_repeated(params.reps, [&](std::size_t r) { original.most_confusing(etas[r], options); });
    row.fast = time_repeated(params.reps, [&](std::size_t r) { fast.solve(etas[r]); });
    return row;
}

}  // namespace

std::vector<DpCompareRow> dp_compare_benchmark(const DpCompareParams& params) {
    std::vector<DpCompareRow> rows;
    std::mt19937_64 rng(params.seed);
    for (std::size_t d : params.branching) {
        DpCompareRow row = compare_on(balanced_tree(d, params.height), params, rng);
        row.family = TreeFamily::Balanced;
        row.parameter = d;
        rows.push_back(row);
    }
    for (std::size_t K : params.random_sizes) {
        if (K < 2) {
            continue;
        }
        DpCompareRow row = compare_on(random_tree(K, rng), params, rng);
        row.family = TreeFamily::Random;
        row.parameter = K;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gravelai
