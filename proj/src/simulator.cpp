#include "gravelai/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>

#include "gravelai/error.hpp"

namespace gravelai {

Instance generate_instance(const TreeGraph& tree, std::span<const Arm> mode_set, Arm k_star, double sigma,
                           const RewardModel& model) {
    if (!(sigma > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
    }
    if (mode_set.empty() || std::find(mode_set.begin(), mode_set.end(), k_star) == mode_set.end()) {
        throw Error(ErrorCode::InvalidArgument, "k_star must belong to the mode set");
    }
    const std::size_t K = tree.size();
    std::vector<double> mu(K, 0.0);
    for (Arm j : mode_set) {
        if (j >= K) {
            throw Error(ErrorCode::IndexOutOfRange, "mode " + std::to_string(j) + " is not an arm");
        }
        auto dist = bfs_distances(tree, j);
        const double weight = j == k_star ? 2.0 : 1.0;
        for (Arm k = 0; k < K; ++k) {
            mu[k] += weight * std::exp(-static_cast<double>(dist[k]) / sigma);
        }
    }
    std::vector<Arm> wanted(mode_set.begin(), mode_set.end());
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
    auto found = modes(tree, mu);
    const auto top = std::max_element(mu.begin(), mu.end());
    if (found != wanted || static_cast<Arm>(top - mu.begin()) != k_star ||
        std::count(mu.begin(), mu.end(), *top) != 1) {
        throw Error(ErrorCode::ModesNotRealized,
                    "sigma = " + std::to_string(sigma) + " does not keep the requested modes");
    }
    return Instance(tree, std::move(mu), wanted.size(), model);
}

std::vector<Arm> spread_modes(const TreeGraph& tree, std::size_t count) {
    const std::size_t K = tree.size();
    if (count == 0 || count > K) {
        throw Error(ErrorCode::InvalidArgument, "mode count must be in 1..K");
    }
    auto from_zero = bfs_distances(tree, 0);
    Arm first = static_cast<Arm>(std::max_element(from_zero.begin(), from_zero.end()) - from_zero.begin());
    std::vector<Arm> chosen{first};
    auto nearest = bfs_distances(tree, first);
    while (chosen.size() < count) {
        Arm next = static_cast<Arm>(std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
        chosen.push_back(next);
        auto d = bfs_distances(tree, next);
        for (Arm k = 0; k < K; ++k) {
            nearest[k] = std::min(nearest[k], d[k]);
        }
    }
    return chosen;
}

DescentConfig simulation_descent() {
    DescentConfig config;
    config.n = 100;
    config.t = 2000;
    return config;
}

void BanditState::record(Arm arm, double reward) {
    const double n = static_cast<double>(counts[arm]);
    means[arm] = (reward + means[arm] * n) / (n + 1.0);
    ++counts[arm];
    ++round;
}

namespace {

// Bernoulli estimates of exactly 0 or 1 have infinite divergences; keep them inside the domain.
std::vector<double> usable_means(std::span<const double> means, const RewardModel& model) {
    std::vector<double> out(means.begin(), means.end());
    if (model.kind() == ModelKind::Bernoulli) {
        for (double& v : out) {
            v = std::clamp(v, 1e-6, 1.0 - 1e-6);
        }
    }
    return out;
}

double rate_objective(std::span<const double> eta, std::span<const double> means) {
    const double top = *std::max_element(means.begin(), means.end());
    double total = 0.0;
    for (std::size_t k = 0; k < eta.size(); ++k) {
        total += eta[k] * (top - means[k]);
    }
    return total;
}

}  // namespace

std::vector<double> classical_rates(std::span<const double> means, const RewardModel& model) {
    auto mu = usable_means(means, model);
    const double top = *std::max_element(mu.begin(), mu.end());
    std::vector<double> eta(mu.size(), 0.0);
    for (Arm k = 0; k < mu.size(); ++k) {
        if (mu[k] < top) {
            eta[k] = 1.0 / divergence(model, k, mu[k], top);
        }
    }
    return eta;
}

std::vector<double> project_to_m_modal(const TreeGraph& tree, const BanditState& state, std::size_t m,
                                       const RewardModel& model) {
    auto mu = usable_means(state.means, model);
    const Arm best = static_cast<Arm>(std::max_element(mu.begin(), mu.end()) - mu.begin());
    auto spread = [&](Arm k) {
        double var = model.kind() == ModelKind::Bernoulli ? mu[k] * (1.0 - mu[k]) : model.variance(k);
        return var / static_cast<double>(std::max<std::size_t>(state.counts[k], 1));
    };
    for (auto found = modes(tree, mu); found.size() > m; found = modes(tree, mu)) {
        Arm weakest = best;
        Arm weakest_peer = best;
        double weakest_score = kInf;
        for (Arm k : found) {
            if (k == best) {
                continue;
            }
            auto nb = tree.neighbors(k);
            Arm peer = *std::max_element(nb.begin(), nb.end(), [&](Arm a, Arm b) { return mu[a] < mu[b]; });
            double score = (mu[k] - mu[peer]) / std::sqrt(spread(k) + spread(peer));
            if (score < weakest_score) {
                weakest_score = score;
                weakest = k;
                weakest_peer = peer;
            }
        }
        mu[weakest] = mu[weakest_peer];
    }
    return mu;
}

RateDecision multimodal_rates(const TreeGraph& tree, const BanditState& state, std::size_t m,
                              const RewardModel& model, const DescentConfig& descent) {
    RateDecision classical{classical_rates(state.means, model), true};
    auto mu = usable_means(state.means, model);
    const double top = *std::max_element(mu.begin(), mu.end());
    if (std::count(mu.begin(), mu.end(), top) != 1) {
        return classical;
    }
    mu = project_to_m_modal(tree, state, m, model);
    Instance instance(tree, mu, m, model);
    GLSolution solution = solve_graves_lai(instance, descent);
    if (!solution.certified) {
        // The averaged iterate rescaled onto the constraint boundary is feasible on the
        // grid, by homogeneity of the constraint in eta.
        if (!(solution.constraint_value > 0.0)) {
            return classical;
        }
        for (double& v : solution.eta) {
            v /= solution.constraint_value;
        }
    }
    auto lai_robbins = classical_rates(mu, model);
    if (rate_objective(solution.eta, mu) >= rate_objective(lai_robbins, mu)) {
        return {std::move(lai_robbins), true};
    }
    return {std::move(solution.eta), false};
}

Arm select_arm(const BanditState& state, std::span<const double> eta) {
    const std::size_t K = state.counts.size();
    const double log_t = std::log(static_cast<double>(state.round));
    bool exploit = true;
    for (Arm k = 0; k < K; ++k) {
        if (static_cast<double>(state.counts[k]) < eta[k] * log_t) {
            exploit = false;
            break;
        }
    }
    if (exploit) {
        return static_cast<Arm>(std::max_element(state.means.begin(), state.means.end()) - state.means.begin());
    }
    Arm best = 0;
    double best_ratio = kInf;
    for (Arm k = 0; k < K; ++k) {
        double ratio = eta[k] > 0.0 ? static_cast<double>(state.counts[k]) / eta[k] : kInf;
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best = k;
        }
    }
    return best;
}

bool is_schedule_round(const SimConfig& config, std::size_t t) {
    switch (config.schedule) {
        case Schedule::EveryRound:
            return true;
        case Schedule::PowersOfTwo:
            return (t & (t - 1)) == 0;
        case Schedule::FixedSet:
            return t == 1 ||
                   std::find(config.fixed_rounds.begin(), config.fixed_rounds.end(), t) != config.fixed_rounds.end();
    }
    return false;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial) {
    // splitmix64 finalizer over the pair
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RewardStream::RewardStream(std::uint64_t master_seed, std::size_t trial) : engine_(trial_seed(master_seed, trial)) {}

double RewardStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RewardStream::draw(const Instance& instance, Arm arm) {
    const double mean = instance.mu()[arm];
    if (instance.model().kind() == ModelKind::Bernoulli) {
        return uniform() < mean ? 1.0 : 0.0;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + std::sqrt(instance.model().variance(arm)) * z;
}

RegretTrace run_trial(const Instance& instance, const SimConfig& config, std::size_t trial) {
    RewardStream stream(config.seed, trial);
    return run_trial(instance, config, [&](Arm arm, std::size_t) { return stream.draw(instance, arm); });
}

RegretTrace run_trial(const Instance& instance, const SimConfig& config, const RewardSource& rewards) {
    if (config.horizon < 1) {
        throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
    }
    const std::size_t K = instance.arms();
    BanditState state(K);
    RegretTrace trace;
    trace.regret.reserve(config.horizon);
    std::vector<double> eta(K, 0.0);
    double regret = 0.0;
    for (std::size_t t = 1; t <= config.horizon; ++t) {
        if (is_schedule_round(config, t)) {
            if (config.policy == Policy::Classical) {
                eta = classical_rates(state.means, instance.model());
            } else {
                RateDecision decision =
                    multimodal_rates(instance.tree(), state, instance.m(), instance.model(), config.descent);
                eta = std::move(decision.eta);
                trace.fallbacks += decision.fallback ? 1 : 0;
            }
        }
        Arm arm = select_arm(state, eta);
        state.record(arm, rewards(arm, t));
        regret += instance.gaps()[arm];
        trace.regret.push_back(regret);
    }
    trace.counts = std::move(state.counts);
    return trace;
}

std::size_t worker_count() {
    std::size_t workers = 0;
    if (const char* env = std::getenv("GRAVELAI_THREADS")) {
        try {
            workers = static_cast<std::size_t>(std::stoul(env));
        } catch (const std::exception&) {
            workers = 0;
        }
    }
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    return workers;
}

std::vector<RegretTrace> run_ossb(const Instance& instance, const SimConfig& config) {
    if (config.trials < 1) {
        throw Error(ErrorCode::InvalidArgument, "at least one trial is required");
    }
    std::vector<RegretTrace> traces(config.trials);
    std::vector<std::exception_ptr> errors(config.trials);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < config.trials; i = next++) {
            try {
                traces[i] = run_trial(instance, config, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min(worker_count(), config.trials);
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    pool.clear();
    for (auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
    return traces;
}

AggregateTrace aggregate(std::span<const RegretTrace> traces) {
    if (traces.empty()) {
        throw Error(ErrorCode::EmptyInput, "no traces to aggregate");
    }
    const std::size_t T = traces.front().regret.size();
    for (const auto& trace : traces) {
        if (trace.regret.size() != T) {
            throw Error(ErrorCode::DimensionMismatch, "traces have different lengths");
        }
    }
    const double count = static_cast<double>(traces.size());
    AggregateTrace out{std::vector<double>(T, 0.0), std::vector<double>(T, 0.0)};
    for (std::size_t t = 0; t < T; ++t) {
        double sum = 0.0;
        for (const auto& trace : traces) {
            sum += trace.regret[t];
        }
        const double mean = sum / count;
        out.mean[t] = mean;
        if (traces.size() > 1) {
            double sq = 0.0;
            for (const auto& trace : traces) {
                sq += (trace.regret[t] - mean) * (trace.regret[t] - mean);
            }
            out.std_error[t] = std::sqrt(sq / (count - 1.0)) / std::sqrt(count);
        }
    }
    return out;
}

void write_aggregate_csv(std::ostream& out, const AggregateTrace& trace) {
    out << "round,mean_regret,std_error\n";
    char line[96];
    for (std::size_t t = 0; t < trace.mean.size(); ++t) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", t + 1, trace.mean[t], trace.std_error[t]);
        out << line;
    }
}

void write_raw_csv(std::ostream& out, std::span<const RegretTrace> traces) {
    out << "trial,round,regret\n";
    char line[96];
    for (std::size_t i = 0; i < traces.size(); ++i) {
        for (std::size_t t = 0; t < traces[i].regret.size(); ++t) {
            std::snprintf(line, sizeof line, "%zu,%zu,%.17g\n", i, t + 1, traces[i].regret[t]);
            out << line;
        }
    }
}

}  // namespace gravelai
