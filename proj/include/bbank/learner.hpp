#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bbank/core.hpp"
#include "bbank/features.hpp"

namespace bbank {

/// Step size beta_k = beta0 * beta_tau / (beta_tau + k) (Robbins-Monro) and
/// exploration rate eps_k = max(eps_min, eps0 * exp(-k / eps_decay)).
struct LearnSchedule {
    std::uint64_t steps = 100000;
    double beta0 = 0.01;
    double beta_tau = 1e4;
    double eps0 = 0.3;
    double eps_min = 0.02;
    double eps_decay = 2e4;
    std::uint64_t seed = 1;

    double beta(std::uint64_t k) const { return beta0 * beta_tau / (beta_tau + static_cast<double>(k)); }
    double epsilon(std::uint64_t k) const;
};

ValidationReport validate_schedule(const LearnSchedule& schedule);

/// R(s,a) + gamma * max_{a'} Q(s_next, a') - Q(s, a).
double td_error(const BankConfig& bank, const BackgroundChain& chain, const State& s, const Action& a,
                const State& s_next, const WeightVector& w);

/// In place: w += beta * delta * phi. Only entry 0 and phi's active block move.
void update_weights(WeightVector& w, const FeatureVector& phi, double delta, double beta);

struct TrainLogEntry {
    std::uint64_t step = 0;   // number of updates applied so far
    double epsilon = 0.0;     // exploration rate at the last update in the window
    double beta = 0.0;        // step size at the last update in the window
    double mean_abs_td = 0.0; // mean |delta| over the window ending at `step`
    double cum_reward = 0.0;  // total reward collected since the start of training
};

struct TrainLog {
    std::uint64_t interval = 1000;
    std::vector<TrainLogEntry> entries;
};

struct TrainResult {
    WeightVector weights;
    TrainLog log;
};

/// Online semi-gradient Q-learning with epsilon-greedy behaviour, starting
/// from w = 0 in state (x0, b0). Background transitions are drawn fresh from
/// the chain. Bit-reproducible from schedule.seed.
/// Throws std::runtime_error if a weight becomes non-finite.
TrainResult train(const BankConfig& bank, const BackgroundChain& chain, const LearnSchedule& schedule, int x0,
                  const std::vector<int>& b0);

/// CSV with columns step,epsilon,beta,mean_abs_td,cum_reward.
void write_train_log_csv(std::ostream& os, const TrainLog& log);

}  // namespace bbank
