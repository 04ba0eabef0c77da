#include "gravelai/fast_confusing_dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "gravelai/error.hpp"
#include "gravelai/validate.hpp"

namespace gravelai {

namespace {

struct Best {
    double value = kInf;
    int index = -1;
};

// phi_v(f) - phi_v(0) for children whose flag-free cost is finite.
double delta(const FlagCosts& phi, int f) { return phi[f] - phi[0]; }

// Two smallest finite entries of delta(., f), skipping `excluded`.
std::pair<Best, Best> two_smallest(std::span<const FlagCosts> phi, int f) {
    Best first;
    Best second;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i][0] == kInf) {
            continue;
        }
        double d = delta(phi[i], f);
        if (d < first.value) {
            second = first;
            first = {d, static_cast<int>(i)};
        } else if (d < second.value) {
            second = {d, static_cast<int>(i)};
        }
    }
    return {first, second};
}

Best smallest_except(std::span<const FlagCosts> phi, int f, int excluded) {
    Best best;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (static_cast<int>(i) == excluded || phi[i][0] == kInf) {
            continue;
        }
        double d = delta(phi[i], f);
        if (d < best.value) {
            best = {d, static_cast<int>(i)};
        }
    }
    return best;
}

}  // namespace

FlagChoice fast_flag_min(std::span<const FlagCosts> phi, int s1, int s2) {
    if (s1 < 0 || s1 > 1 || s2 < 0 || s2 > 1) {
        throw Error(ErrorCode::InvalidArgument, "flag sums must be 0 or 1");
    }
    // Children that cannot stay flag-free must carry a flag.
    double base = 0.0;
    int forced[2] = {-1, -1};
    int forced_count = 0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i][0] == kInf) {
            if (forced_count == 2) {
                return {};
            }
            forced[forced_count++] = static_cast<int>(i);
        } else {
            base += phi[i][0];
        }
    }

    FlagChoice out;
    auto consider = [&](double extra, int b_child, int c_child) {
        double value = base + extra;
        if (value < out.value) {
            out = {value, b_child, c_child};
        }
    };

    if (s1 == 0 && s2 == 0) {
        if (forced_count == 0) {
            out.value = base;
        }
        return out;
    }
    if (s1 + s2 == 1) {
        const int f = s1 == 1 ? 1 : 2;
        Best pick;
        if (forced_count == 1) {
            pick = {phi[forced[0]][f], forced[0]};
        } else if (forced_count == 0) {
            pick = smallest_except(phi, f, -1);
        }
        if (pick.index >= 0) {
            consider(pick.value, f == 1 ? pick.index : -1, f == 2 ? pick.index : -1);
        }
        return out;
    }

    if (forced_count == 2) {
        const int u = forced[0];
        const int v = forced[1];
        consider(phi[u][1] + phi[v][2], u, v);
        consider(phi[u][2] + phi[v][1], v, u);
    } else if (forced_count == 1) {
        const int v = forced[0];
        consider(phi[v][3], v, v);
        Best c_other = smallest_except(phi, 2, v);
        if (c_other.index >= 0) {
            consider(phi[v][1] + c_other.value, v, c_other.index);
        }
        Best b_other = smallest_except(phi, 1, v);
        if (b_other.index >= 0) {
            consider(phi[v][2] + b_other.value, b_other.index, v);
        }
    } else {
        Best both = smallest_except(phi, 3, -1);
        if (both.index >= 0) {
            consider(both.value, both.index, both.index);
        }
        auto [b1, b2] = two_smallest(phi, 1);
        auto [c1, c2] = two_smallest(phi, 2);
        if (b1.index >= 0 && c1.index >= 0 && b1.index != c1.index) {
            consider(b1.value + c1.value, b1.index, c1.index);
        } else if (b1.index >= 0 && c1.index >= 0) {
            if (c2.index >= 0) {
                consider(b1.value + c2.value, b1.index, c2.index);
            }
            if (b2.index >= 0) {
                consider(b2.value + c1.value, b2.index, c1.index);
            }
        }
    }
    if (out.value == kInf) {
        return {};
    }
    return out;
}

FastConfusingSolver::FastConfusingSolver(const Instance& instance, Grid grid)
    : instance_(&instance), grid_(std::move(grid)), table_(instance, grid_), tree_(instance.tree(), instance.best()) {
    if (instance.arms() < 2) {
        throw Error(ErrorCode::DegenerateInstance, "no confusing parameter exists with a single arm");
    }
}

namespace {

// Which child aggregate a parent consumes.
enum class Agg : std::uint8_t { Below, Equal, Above };

struct Record {
    std::int8_t sb = 0;
    std::int8_t sc = 0;
    std::int32_t w = -1;  // child position lifted to at least the parent value (a = 1)
    std::int32_t b_child = -1;
    std::int32_t c_child = -1;
};

// Extended difference used to rank candidate children: inf - x ranks last among finite keys,
// x - inf ranks first, inf - inf ranks after everything.
double ranked_difference(double a, double b) {
    if (a == kInf && b == kInf) {
        return std::nan("");
    }
    if (a == kInf) {
        return kInf;
    }
    if (b == kInf) {
        return -kInf;
    }
    return a - b;
}

bool ranks_before(double x, int ix, double y, int iy) {
    bool xn = std::isnan(x);
    bool yn = std::isnan(y);
    if (xn != yn) {
        return yn;
    }
    if (!xn && x != y) {
        return x < y;
    }
    return ix < iy;
}

}  // namespace

ConfusingResult FastConfusingSolver::solve(std::span<const double> eta) const {
    const Instance& inst = *instance_;
    check_eta(inst, eta);
    const std::size_t K = inst.arms();
    const std::size_t W = grid_.size();
    const std::size_t top = grid_.top();
    const Arm root = inst.best();

    ConfusingResult result;
    // Single-coordinate candidates. With a tight budget only arms next to a mode qualify.
    for (Arm k = 0; k < K; ++k) {
        if (!trivial_applicable(inst, k)) {
            continue;
        }
        double value = eta[k] * table_(k, top);
        if (value < result.value || result.lambda.empty()) {
            result.value = value;
            result.lambda = inst.mu();
            result.lambda[k] = inst.mu_max();
            result.witness = {WitnessKind::Trivial, k, 0};
        }
    }
    if (inst.modes().size() < inst.m()) {
        return result;
    }

    auto H = [W](Arm l, std::size_t z, int a, int f) { return ((l * W + z) * 3 + a) * 4 + f; };
    auto A = [W](Arm l, std::size_t z, int f) { return (l * W + z) * 4 + f; };

    std::vector<double> h(K * W * 12, kInf);
    std::vector<Record> rec(K * W * 12);
    std::vector<double> lt(K * W * 4), gt(K * W * 4), ge(K * W * 4), st(K * W * 4);
    std::vector<std::int32_t> lt_idx(K * W * 4), gt_idx(K * W * 4);
    std::vector<std::int8_t> gt_a(K * W * 4);
    std::vector<Agg> ge_pick(K * W * 4), st_pick(K * W * 4);

    std::vector<FlagCosts> phi_lt, phi_st, phi_mod;
    std::vector<int> candidates;

    for (Arm l : tree_.postorder()) {
        auto children = tree_.children(l);
        const std::size_t C = children.size();
        const bool mode = inst.is_mode(l) && l != root;

        for (std::size_t z = 0; z < W; ++z) {
            double cost;
            if (l == root) {
                cost = z == top ? 0.0 : kInf;
            } else {
                cost = eta[l] == 0.0 ? 0.0 : eta[l] * table_(l, z);
            }
            if (cost == kInf) {
                continue;
            }

            phi_lt.resize(C);
            phi_st.resize(C);
            for (std::size_t i = 0; i < C; ++i) {
                for (int f = 0; f < 4; ++f) {
                    phi_lt[i][f] = lt[A(children[i], z, f)];
                    phi_st[i][f] = st[A(children[i], z, f)];
                }
            }

            // Child aggregates for every residual flag pair r = b + 2c.
            FlagChoice below[4], free[4], lifted[4];
            int lifted_w[4] = {-1, -1, -1, -1};
            for (int r = 0; r < 4; ++r) {
                below[r] = fast_flag_min(phi_lt, r & 1, r >> 1);
                free[r] = fast_flag_min(phi_st, r & 1, r >> 1);
            }

            if (C > 0) {
                // The lifted child is among the three best of some ranking key.
                candidates.clear();
                for (int key = 0; key < 4; ++key) {
                    int top3[3] = {-1, -1, -1};
                    double val3[3] = {0, 0, 0};
                    for (std::size_t i = 0; i < C; ++i) {
                        double v = ranked_difference(ge[A(children[i], z, key)], phi_st[i][0]);
                        int at = static_cast<int>(i);
                        for (int s = 0; s < 3; ++s) {
                            if (top3[s] < 0 || ranks_before(v, at, val3[s], top3[s])) {
                                std::swap(v, val3[s]);
                                std::swap(at, top3[s]);
                                if (at < 0) {
                                    break;
                                }
                            }
                        }
                    }
                    for (int s = 0; s < 3; ++s) {
                        if (top3[s] >= 0) {
                            candidates.push_back(top3[s]);
                        }
                    }
                }
                std::sort(candidates.begin(), candidates.end());
                candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

                phi_mod = phi_st;
                for (int w : candidates) {
                    for (int f = 0; f < 4; ++f) {
                        phi_mod[w][f] = ge[A(children[w], z, f)];
                    }
                    for (int r = 0; r < 4; ++r) {
                        FlagChoice c = fast_flag_min(phi_mod, r & 1, r >> 1);
                        if (c.value < lifted[r].value) {
                            lifted[r] = c;
                            lifted_w[r] = w;
                        }
                    }
                    phi_mod[w] = phi_st[w];
                }
            }

            for (int a = 0; a < 3; ++a) {
                if (l == root && a == 2) {
                    continue;
                }
                const FlagChoice* pool = a == 0 ? below : (a == 1 ? lifted : free);
                for (int f = 0; f < 4; ++f) {
                    const int b = f & 1;
                    const int c = f >> 1;
                    double best = kInf;
                    Record best_rec;
                    // Options: nothing, new optimum, removed mode.
                    for (int option = 0; option < 3; ++option) {
                        const int sb = option & 1;
                        const int sc = option >> 1;
                        if (sb > b || sc > c) {
                            continue;
                        }
                        if (sb && (z != top || l == root)) {
                            continue;
                        }
                        if (sc && (a == 0 || !mode)) {
                            continue;
                        }
                        if (a == 0 && !((inst.is_mode(l) && sc == 0) || sb == 1)) {
                            continue;
                        }
                        const int r = (b - sb) + 2 * (c - sc);
                        const FlagChoice& choice = pool[r];
                        if (choice.value < best) {
                            best = choice.value;
                            best_rec = {static_cast<std::int8_t>(sb), static_cast<std::int8_t>(sc),
                                        a == 1 ? lifted_w[r] : -1, choice.b_child, choice.c_child};
                        }
                    }
                    if (best < kInf) {
                        h[H(l, z, a, f)] = cost + best;
                        rec[H(l, z, a, f)] = best_rec;
                    }
                }
            }
        }

        if (l == root) {
            break;
        }

        for (int f = 0; f < 4; ++f) {
            // Below: parent strictly above, child's own parent constraint is a = 2.
            double run = kInf;
            std::int32_t run_idx = -1;
            for (std::size_t z = 0; z < W; ++z) {
                lt[A(l, z, f)] = run;
                lt_idx[A(l, z, f)] = run_idx;
                double v = h[H(l, z, 2, f)];
                if (v < run) {
                    run = v;
                    run_idx = static_cast<std::int32_t>(z);
                }
            }
            // Above: child strictly higher than the parent, so it cannot lean on the parent.
            run = kInf;
            run_idx = -1;
            std::int8_t run_a = 0;
            for (std::size_t z = W; z-- > 0;) {
                gt[A(l, z, f)] = run;
                gt_idx[A(l, z, f)] = run_idx;
                gt_a[A(l, z, f)] = run_a;
                double v0 = h[H(l, z, 0, f)];
                double v1 = h[H(l, z, 1, f)];
                double v = std::min(v0, v1);
                if (v <= run && v < kInf) {
                    run = v;
                    run_idx = static_cast<std::int32_t>(z);
                    run_a = v0 <= v1 ? 0 : 1;
                }
            }
            for (std::size_t z = 0; z < W; ++z) {
                const std::size_t cell = A(l, z, f);
                const double eq = h[H(l, z, 2, f)];
                if (eq <= gt[cell]) {
                    ge[cell] = eq;
                    ge_pick[cell] = Agg::Equal;
                } else {
                    ge[cell] = gt[cell];
                    ge_pick[cell] = Agg::Above;
                }
                if (lt[cell] <= ge[cell]) {
                    st[cell] = lt[cell];
                    st_pick[cell] = Agg::Below;
                } else {
                    st[cell] = ge[cell];
                    st_pick[cell] = ge_pick[cell];
                }
            }
        }
    }

    int root_a = h[H(root, top, 0, 3)] <= h[H(root, top, 1, 3)] ? 0 : 1;
    double jump = h[H(root, top, root_a, 3)];
    if (!(jump < result.value)) {
        return result;
    }

    result.value = jump;
    result.lambda.assign(K, 0.0);
    result.witness.kind = WitnessKind::Subproblem;
    struct Frame {
        Arm node;
        std::size_t z;
        int a;
        int f;
    };
    std::vector<Frame> stack{{root, top, root_a, 3}};
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        result.lambda[fr.node] = grid_[fr.z];
        const Record& r = rec[H(fr.node, fr.z, fr.a, fr.f)];
        if (r.sb) {
            result.witness.k = fr.node;
        }
        if (r.sc) {
            result.witness.k_prime = fr.node;
        }
        auto children = tree_.children(fr.node);
        for (std::size_t i = 0; i < children.size(); ++i) {
            const Arm child = children[i];
            const int pos = static_cast<int>(i);
            const int cf = (pos == r.b_child ? 1 : 0) + (pos == r.c_child ? 2 : 0);
            const std::size_t cell = A(child, fr.z, cf);
            Agg pick;
            if (fr.a == 0) {
                pick = Agg::Below;
            } else if (fr.a == 1 && pos == r.w) {
                pick = ge_pick[cell];
            } else {
                pick = st_pick[cell];
            }
            switch (pick) {
                case Agg::Below:
                    stack.push_back({child, static_cast<std::size_t>(lt_idx[cell]), 2, cf});
                    break;
                case Agg::Equal:
                    stack.push_back({child, fr.z, 2, cf});
                    break;
                case Agg::Above:
                    stack.push_back({child, static_cast<std::size_t>(gt_idx[cell]), gt_a[cell], cf});
                    break;
            }
        }
    }
    return result;
}

ConfusingResult solve_pgl_prime(const Instance& instance, std::span<const double> eta, const Grid& grid) {
    return FastConfusingSolver(instance, grid).solve(eta);
}

}  // namespace gravelai
