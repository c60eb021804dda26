#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bbank/core.hpp"
#include "bbank/policies.hpp"

namespace bbank {

inline constexpr std::size_t kDefaultStateCap = 1000000;
inline constexpr std::size_t kDefaultMaxSweeps = 100000;

class StateCapExceeded : public std::runtime_error {
public:
    StateCapExceeded(std::size_t states, std::size_t cap);
    std::size_t states;
};

class SolverDidNotConverge : public std::runtime_error {
public:
    SolverDidNotConverge(std::size_t sweeps, double residual);
    double residual;
};

/// Bijection between index and (x, b). Index = x * num_occupancies + the
/// mixed-radix encoding of b with battery 0 most significant.
class StateSpace {
public:
    StateSpace(const BankConfig& bank, const BackgroundChain& chain, std::size_t cap = kDefaultStateCap);

    std::size_t size() const { return num_bg_ * num_occ_; }
    std::size_t num_occupancies() const { return num_occ_; }
    std::size_t num_bg_states() const { return num_bg_; }

    std::size_t occupancy_index(const std::vector<int>& b) const;
    std::size_t index(const State& s) const { return static_cast<std::size_t>(s.x) * num_occ_ + occupancy_index(s.b); }
    State state(std::size_t idx) const;

private:
    std::vector<int> capacities_;
    std::size_t num_bg_ = 0;
    std::size_t num_occ_ = 1;
};

inline StateSpace enumerate_states(const BankConfig& bank, const BackgroundChain& chain,
                                   std::size_t cap = kDefaultStateCap) {
    return StateSpace(bank, chain, cap);
}

/// Flattened MDP: feasible actions, rewards and deterministic occupancy
/// successors per state. Only x -> x' is random, so a backup sums over
/// |S_e| successors per action.
class TabularModel {
public:
    TabularModel(const BankConfig& bank, const BackgroundChain& chain, std::size_t cap = kDefaultStateCap);

    const StateSpace& space() const { return space_; }
    double gamma() const { return gamma_; }
    std::size_t num_states() const { return space_.size(); }
    std::size_t num_pairs() const { return actions_.size(); }

    std::size_t first_pair(std::size_t s) const { return offsets_[s]; }
    std::size_t end_pair(std::size_t s) const { return offsets_[s + 1]; }
    const Action& action(std::size_t pair) const { return actions_[pair]; }
    double reward(std::size_t pair) const { return rewards_[pair]; }

    /// Expected next-state value: sum_x' P(x, x') V((x', b_next)).
    double expected_next_value(std::size_t s, std::size_t pair, const std::vector<double>& v) const;

    /// Position of `a` in the feasible list of state s; throws if infeasible.
    std::size_t pair_of(std::size_t s, const Action& a) const;

private:
    StateSpace space_;
    double gamma_;
    std::vector<std::vector<double>> transition_;
    std::vector<std::size_t> offsets_;
    std::vector<Action> actions_;
    std::vector<double> rewards_;
    std::vector<std::size_t> next_occ_;
};

/// Q indexed by pair (see TabularModel::first_pair).
using QTable = std::vector<double>;

struct ExactSolution {
    QTable q;
    std::vector<double> value;              // max_a q(s, a)
    std::vector<std::size_t> best_pair;     // lexicographically first maximizer
    double residual = 0.0;
    std::size_t iterations = 0;
    double tol = 0.0;

    /// Value suboptimality bound of the greedy-in-q policy: 2 gamma tol / (1 - gamma).
    double suboptimality_bound(double gamma) const { return 2.0 * gamma * tol / (1.0 - gamma); }
};

std::vector<double> state_values(const TabularModel& model, const QTable& q);

/// One synchronous sweep; returns (q', sup-norm of q' - q).
std::pair<QTable, double> bellman_backup(const TabularModel& model, const QTable& q);

ExactSolution solve_q_iteration(const TabularModel& model, double tol = 1e-9,
                                std::size_t max_sweeps = kDefaultMaxSweeps);

/// Value of a deterministic stationary policy, iterated to a sup-norm change <= tol.
std::vector<double> evaluate_policy_exact(const TabularModel& model, const Policy& policy, double tol = 1e-9,
                                          std::size_t max_sweeps = kDefaultMaxSweeps);

/// CSV: state_index,x,b,best_action,value. b and best_action use "(a;b)" tuples.
void write_solution_csv(std::ostream& os, const TabularModel& model, const ExactSolution& sol);

}  // namespace bbank
