#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gravelai/reward_models.hpp"
#include "gravelai/tree_graph.hpp"

namespace gravelai {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Uniform discretization of [mu_min, mu_max]. The last point is exactly mu_max.
struct Grid {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    std::size_t top() const noexcept { return values.size() - 1; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// n+1 points i = 0..n by default; `include_lower = false` keeps only i = 1..n.
Grid make_grid(const Instance& instance, std::size_t n, bool include_lower = true);

enum class WitnessKind { Trivial, Subproblem };

struct Witness {
    WitnessKind kind = WitnessKind::Trivial;
    Arm k = 0;        // arm raised to mu*
    Arm k_prime = 0;  // removed mode, subproblems only
};

struct Candidate {
    double value = kInf;
    std::vector<double> lambda;  // empty when value is infinite
};

struct ConfusingResult {
    double value = kInf;
    std::vector<double> lambda;
    Witness witness;
};

/// True when the single-coordinate candidate for arm k is admissible.
bool trivial_applicable(const Instance& instance, Arm k);

/// eta_k d_k(mu_k, mu*) and the vector mu with coordinate k raised to mu*.
Candidate trivial_value(const Instance& instance, std::span<const double> eta, Arm k);

/// Table of d_l(mu_l, grid[z]), shared by the dynamic programs.
class DivergenceTable {
public:
    DivergenceTable(const Instance& instance, const Grid& grid);

    double operator()(Arm arm, std::size_t z) const { return data_[arm * width_ + z]; }
    std::size_t width() const noexcept { return width_; }

private:
    std::size_t width_;
    std::vector<double> data_;
};

struct ConfusingOptions {
    /// Skip subproblem k when eta_k d_k(mu_k, mu*) already reaches the best value found.
    bool skip = true;
};

/// Per-subproblem tree DP. Holds the grid, divergence table and one rooted tree per
/// admissible new optimum; the instance must outlive the solver.
class ConfusingSolver {
public:
    ConfusingSolver(const Instance& instance, Grid grid);

    const Instance& instance() const noexcept { return *instance_; }
    const Grid& grid() const noexcept { return grid_; }
    const DivergenceTable& table() const noexcept { return table_; }

    /// Arms whose single-coordinate candidate enters the minimum.
    const std::vector<Arm>& trivial_arms() const noexcept { return trivial_arms_; }
    /// Pairs (k, k') solved by the tree DP; empty when the mode budget is slack.
    const std::vector<std::pair<Arm, Arm>>& subproblems() const noexcept { return subproblems_; }

    Candidate solve_subproblem(std::span<const double> eta, Arm k, Arm k_prime) const;
    ConfusingResult most_confusing(std::span<const double> eta, ConfusingOptions options = {}) const;

private:
    const Instance* instance_;
    Grid grid_;
    DivergenceTable table_;
    std::vector<Arm> trivial_arms_;
    std::vector<std::pair<Arm, Arm>> subproblems_;
    std::vector<std::optional<RootedTree>> rooted_;
};

Candidate solve_subproblem(const Instance& instance, std::span<const double> eta, const Grid& grid,
                           Arm k, Arm k_prime);

ConfusingResult most_confusing(const Instance& instance, std::span<const double> eta, const Grid& grid,
                               ConfusingOptions options = {});

/// eta^T d(mu, lambda).
double objective(const Instance& instance, std::span<const double> eta, std::span<const double> lambda);

/// The vector d(mu, lambda).
std::vector<double> divergence_vector(const Instance& instance, std::span<const double> lambda);

}  // namespace gravelai
