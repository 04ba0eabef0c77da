#include "gravelai/confusing_dp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gravelai/error.hpp"
#include "gravelai/validate.hpp"

namespace gravelai {

Grid make_grid(const Instance& instance, std::size_t n, bool include_lower) {
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "grid size n must be at least 1");
    }
    const double lo = instance.mu_min();
    const double hi = instance.mu_max();
    Grid grid;
    grid.values.reserve(n + 1);
    for (std::size_t i = include_lower ? 0 : 1; i < n; ++i) {
        grid.values.push_back(lo + (static_cast<double>(i) / static_cast<double>(n)) * (hi - lo));
    }
    grid.values.push_back(hi);
    return grid;
}

bool trivial_applicable(const Instance& instance, Arm k) {
    if (k >= instance.arms() || k == instance.best()) {
        return false;
    }
    return instance.in_neighborhood(k) || instance.modes().size() < instance.m();
}

Candidate trivial_value(const Instance& instance, std::span<const double> eta, Arm k) {
    check_eta(instance, eta);
    if (!trivial_applicable(instance, k)) {
        throw Error(ErrorCode::NotApplicable,
                    "arm " + std::to_string(k) + " has no single-coordinate confusing parameter");
    }
    Candidate out;
    out.value = eta[k] * instance.divergence(k, instance.mu_max());
    out.lambda = instance.mu();
    out.lambda[k] = instance.mu_max();
    return out;
}

DivergenceTable::DivergenceTable(const Instance& instance, const Grid& grid)
    : width_(grid.size()), data_(instance.arms() * grid.size()) {
    for (Arm arm = 0; arm < instance.arms(); ++arm) {
        for (std::size_t z = 0; z < width_; ++z) {
            data_[arm * width_ + z] = instance.divergence(arm, grid[z]);
        }
    }
}

double objective(const Instance& instance, std::span<const double> eta, std::span<const double> lambda) {
    double total = 0.0;
    for (Arm k = 0; k < instance.arms(); ++k) {
        if (eta[k] != 0.0) {
            total += eta[k] * instance.divergence(k, lambda[k]);
        }
    }
    return total;
}

std::vector<double> divergence_vector(const Instance& instance, std::span<const double> lambda) {
    if (lambda.size() != instance.arms()) {
        throw Error(ErrorCode::DimensionMismatch, "lambda has the wrong length");
    }
    std::vector<double> out(instance.arms());
    for (Arm k = 0; k < instance.arms(); ++k) {
        out[k] = instance.divergence(k, lambda[k]);
    }
    return out;
}

ConfusingSolver::ConfusingSolver(const Instance& instance, Grid grid)
    : instance_(&instance), grid_(std::move(grid)), table_(instance, grid_), rooted_(instance.arms()) {
    if (instance.arms() < 2) {
        throw Error(ErrorCode::DegenerateInstance, "no confusing parameter exists with a single arm");
    }
    const Arm best = instance.best();
    for (Arm k = 0; k < instance.arms(); ++k) {
        if (trivial_applicable(instance, k)) {
            trivial_arms_.push_back(k);
        }
    }
    if (instance.modes().size() == instance.m()) {
        for (Arm k = 0; k < instance.arms(); ++k) {
            if (instance.in_neighborhood(k)) {
                continue;
            }
            rooted_[k].emplace(instance.tree(), k);
            for (Arm kp : instance.modes()) {
                if (kp != best) {
                    subproblems_.emplace_back(k, kp);
                }
            }
        }
    }
}

namespace {

// Forward-pass tables, one row of `width` entries per node. Every cell read is written first,
// so the buffers are reused across calls without clearing.
struct SubproblemTables {
    void reset(std::size_t nodes, std::size_t w) {
        width = w;
        const std::size_t cells = nodes * w;
        for (auto* v : {&base, &plus, &pre_val, &suf_val, &dia}) {
            v->resize(cells);
        }
        for (auto* v : {&pre_idx, &suf_idx, &dia_w, &ge_w, &forced}) {
            v->resize(cells);
        }
        dia_up.resize(cells);
        ge_up.resize(cells);
    }

    std::size_t width = 0;
    std::vector<double> base;  // f(z, -1)
    std::vector<double> plus;  // f(z, +1)
    std::vector<double> pre_val, suf_val, dia;
    std::vector<int> pre_idx, suf_idx, dia_w, ge_w, forced;
    std::vector<char> dia_up, ge_up;
};

}  // namespace

Candidate ConfusingSolver::solve_subproblem(std::span<const double> eta, Arm k, Arm k_prime) const {
    const Instance& inst = *instance_;
    check_eta(inst, eta);
    if (inst.modes().size() != inst.m()) {
        throw Error(ErrorCode::NotApplicable, "subproblems apply only when the mode budget is tight");
    }
    if (k >= inst.arms() || inst.in_neighborhood(k)) {
        throw Error(ErrorCode::NotApplicable, "new optimum must lie outside the mode neighborhood");
    }
    if (k_prime >= inst.arms() || !inst.is_mode(k_prime) || k_prime == inst.best()) {
        throw Error(ErrorCode::NotApplicable, "removed arm must be a suboptimal mode");
    }

    const RootedTree& tree = *rooted_[k];
    const std::size_t W = grid_.size();
    const std::size_t top = grid_.top();
    const Arm best = inst.best();
    thread_local SubproblemTables t;
    t.reset(inst.arms(), W);

    auto allowed = [&](Arm l) { return l == k || (inst.is_mode(l) && l != k_prime); };
    auto local_cost = [&](Arm l, std::size_t z) {
        if (l == best) {
            return z == top ? 0.0 : kInf;
        }
        return eta[l] == 0.0 ? 0.0 : eta[l] * table_(l, z);
    };

    for (Arm l : tree.postorder()) {
        const std::size_t row = l * W;
        auto children = tree.children(l);
        for (std::size_t z = 0; z < W; ++z) {
            double value = local_cost(l, z);
            for (Arm j : children) {
                value += t.dia[j * W + z];
            }
            t.base[row + z] = value;
        }
        if (l == k) {
            break;  // root: only f(mu*, -1) is read
        }

        if (allowed(l)) {
            std::copy_n(t.base.begin() + row, W, t.plus.begin() + row);
        } else {
            // A node above its parent that may not be a mode needs a child at least as high.
            for (std::size_t z = 0; z < W; ++z) {
                double best_g = kInf;
                int best_child = -1;
                if (t.base[row + z] < kInf) {
                    for (Arm v : children) {
                        const std::size_t cell = v * W + z;
                        if (t.dia[cell] == kInf) {
                            continue;
                        }
                        double g = std::min(t.suf_val[cell], t.base[cell]) - t.dia[cell];
                        if (g < best_g) {
                            best_g = g;
                            best_child = static_cast<int>(v);
                        }
                    }
                }
                t.plus[row + z] = best_child >= 0 ? t.base[row + z] + best_g : kInf;
                t.forced[row + z] = best_child;
                if (best_child >= 0) {
                    const std::size_t cell = static_cast<Arm>(best_child) * W + z;
                    bool equal_wins = t.base[cell] <= t.suf_val[cell];
                    t.ge_w[row + z] = equal_wins ? static_cast<int>(z) : t.suf_idx[cell];
                    t.ge_up[row + z] = equal_wins ? 0 : 1;
                }
            }
        }

        // Prefix minima of f(., -1) over w <= z and suffix minima of f(., +1) over w > z.
        for (std::size_t z = 0; z < W; ++z) {
            const std::size_t cell = row + z;
            if (z == 0 || t.base[cell] < t.pre_val[cell - 1]) {
                t.pre_val[cell] = t.base[cell];
                t.pre_idx[cell] = static_cast<int>(z);
            } else {
                t.pre_val[cell] = t.pre_val[cell - 1];
                t.pre_idx[cell] = t.pre_idx[cell - 1];
            }
        }
        t.suf_val[row + top] = kInf;
        t.suf_idx[row + top] = -1;
        for (std::size_t z = top; z-- > 0;) {
            const std::size_t cell = row + z;
            if (t.plus[cell + 1] <= t.suf_val[cell + 1]) {
                t.suf_val[cell] = t.plus[cell + 1];
                t.suf_idx[cell] = static_cast<int>(z + 1);
            } else {
                t.suf_val[cell] = t.suf_val[cell + 1];
                t.suf_idx[cell] = t.suf_idx[cell + 1];
            }
        }
        for (std::size_t z = 0; z < W; ++z) {
            const std::size_t cell = row + z;
            bool below = t.pre_val[cell] <= t.suf_val[cell];
            t.dia[cell] = below ? t.pre_val[cell] : t.suf_val[cell];
            if (t.dia[cell] == kInf) {
                t.dia_w[cell] = -1;
            } else {
                t.dia_w[cell] = below ? t.pre_idx[cell] : t.suf_idx[cell];
            }
            t.dia_up[cell] = below ? 0 : 1;
        }
    }

    Candidate out;
    out.value = t.base[k * W + top];
    if (out.value == kInf) {
        return out;
    }

    out.lambda.assign(inst.arms(), 0.0);
    struct Frame {
        Arm node;
        std::size_t z;
        bool up;
    };
    std::vector<Frame> stack{{k, top, false}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        out.lambda[f.node] = grid_[f.z];
        const std::size_t cell = f.node * W + f.z;
        const int forced = (f.up && !allowed(f.node)) ? t.forced[cell] : -1;
        for (Arm c : tree.children(f.node)) {
            if (static_cast<int>(c) == forced) {
                stack.push_back({c, static_cast<std::size_t>(t.ge_w[cell]), t.ge_up[cell] != 0});
            } else {
                const std::size_t ccell = c * W + f.z;
                stack.push_back({c, static_cast<std::size_t>(t.dia_w[ccell]), t.dia_up[ccell] != 0});
            }
        }
    }
    return out;
}

ConfusingResult ConfusingSolver::most_confusing(std::span<const double> eta, ConfusingOptions options) const {
    const Instance& inst = *instance_;
    check_eta(inst, eta);
    const std::size_t top = grid_.top();

    ConfusingResult best;
    for (Arm k : trivial_arms_) {
        double value = eta[k] * table_(k, top);
        if (value < best.value || best.lambda.empty()) {
            best.value = value;
            best.lambda = inst.mu();
            best.lambda[k] = inst.mu_max();
            best.witness = {WitnessKind::Trivial, k, 0};
        }
    }
    for (auto [k, kp] : subproblems_) {
        if (options.skip && eta[k] * table_(k, top) >= best.value) {
            continue;
        }
        Candidate candidate = solve_subproblem(eta, k, kp);
        if (candidate.value < best.value) {
            best.value = candidate.value;
            best.lambda = std::move(candidate.lambda);
            best.witness = {WitnessKind::Subproblem, k, kp};
        }
    }
    return best;
}

Candidate solve_subproblem(const Instance& instance, std::span<const double> eta, const Grid& grid,
                           Arm k, Arm k_prime) {
    return ConfusingSolver(instance, grid).solve_subproblem(eta, k, k_prime);
}

ConfusingResult most_confusing(const Instance& instance, std::span<const double> eta, const Grid& grid,
                               ConfusingOptions options) {
    return ConfusingSolver(instance, grid).most_confusing(eta, options);
}

}  // namespace gravelai
