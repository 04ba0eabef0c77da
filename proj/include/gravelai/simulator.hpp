#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "gravelai/gl_descent.hpp"
#include "gravelai/reward_models.hpp"
#include "gravelai/tree_graph.hpp"

namespace gravelai {

/// mu_k = sum over modes j of (1 + [j == k_star]) exp(-dist(j, k) / sigma).
/// Throws ModesNotRealized unless the result has exactly `mode_set` as modes and k_star on top.
Instance generate_instance(const TreeGraph& tree, std::span<const Arm> mode_set, Arm k_star, double sigma,
                           const RewardModel& model = RewardModel::gaussian());

/// `count` nodes chosen greedily far apart: a diameter endpoint first, then farthest-point
/// selection (lowest index on ties). The first returned node is meant to be the best arm.
std::vector<Arm> spread_modes(const TreeGraph& tree, std::size_t count);

enum class Policy { Multimodal, Classical };

/// Descent settings used inside simulations: n = 100 grid points.
DescentConfig simulation_descent();
enum class Schedule { PowersOfTwo, EveryRound, FixedSet };

struct SimConfig {
    std::size_t horizon = 10000;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    Policy policy = Policy::Multimodal;
    Schedule schedule = Schedule::PowersOfTwo;
    std::vector<std::size_t> fixed_rounds;  // used by Schedule::FixedSet
    DescentConfig descent = simulation_descent();
};

struct BanditState {
    std::vector<std::size_t> counts;
    std::vector<double> means;
    std::size_t round = 1;

    explicit BanditState(std::size_t arms) : counts(arms, 0), means(arms, 0.0) {}
    void record(Arm arm, double reward);
};

/// 1 / d_k(mu_hat_k, max mu_hat) on arms strictly below the empirical maximum, 0 elsewhere.
std::vector<double> classical_rates(std::span<const double> means, const RewardModel& model);

struct RateDecision {
    std::vector<double> eta;
    bool fallback = false;  // classical rates were used
};

/// Flattens the least significant non-best modes of the estimate onto their highest neighbor
/// until at most m remain. Significance is the gap to that neighbor in standard errors.
std::vector<double> project_to_m_modal(const TreeGraph& tree, const BanditState& state, std::size_t m,
                                       const RewardModel& model);

/// Rates from the descent on (tree, projected estimate, m). A tied empirical maximum, an
/// unusable solve, or rates costlier than the classical ones give the classical rates.
RateDecision multimodal_rates(const TreeGraph& tree, const BanditState& state, std::size_t m,
                              const RewardModel& model, const DescentConfig& descent);

/// One OSSB decision: exploit when every N_k >= eta_k ln t, else explore argmin N_k / eta_k.
Arm select_arm(const BanditState& state, std::span<const double> eta);

bool is_schedule_round(const SimConfig& config, std::size_t t);

struct RegretTrace {
    std::vector<double> regret;  // cumulative pseudo-regret after each round
    std::vector<std::size_t> counts;
    std::size_t fallbacks = 0;
};

/// Reward source for one trial: mt19937_64 seeded with splitmix64(master_seed, trial).
/// Uniforms take the top 53 bits; Gaussian draws use Box-Muller, one draw per call.
class RewardStream {
public:
    RewardStream(std::uint64_t master_seed, std::size_t trial);
    double draw(const Instance& instance, Arm arm);

private:
    double uniform();

    std::mt19937_64 engine_;
};

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial);

/// Reward of arm k at round t.
using RewardSource = std::function<double(Arm, std::size_t)>;

RegretTrace run_trial(const Instance& instance, const SimConfig& config, const RewardSource& rewards);
RegretTrace run_trial(const Instance& instance, const SimConfig& config, std::size_t trial);

/// All trials, in parallel up to GRAVELAI_THREADS workers. Output order is by trial index.
std::vector<RegretTrace> run_ossb(const Instance& instance, const SimConfig& config);

struct AggregateTrace {
    std::vector<double> mean;
    std::vector<double> std_error;
};

AggregateTrace aggregate(std::span<const RegretTrace> traces);

void write_aggregate_csv(std::ostream& out, const AggregateTrace& trace);
void write_raw_csv(std::ostream& out, std::span<const RegretTrace> traces);

/// Worker count from GRAVELAI_THREADS (unset or 0 = hardware concurrency).
std::size_t worker_count();

}  // namespace gravelai
