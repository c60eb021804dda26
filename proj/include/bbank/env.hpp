#pragma once

#include <utility>
#include <vector>

#include "bbank/core.hpp"

namespace bbank {

/// Bank-wide movement limits in a state. lo is minus the most energy the bank
/// can release this step, hi the most it can absorb; target is the net
/// generation clipped onto [lo, hi] and is what every feasible action sums to.
struct ActionBounds {
    int lo = 0;
    int hi = 0;
    int target = 0;
};

ActionBounds action_bounds(const BankConfig& bank, const State& s, int net_gen);
ActionBounds action_bounds(const BankConfig& bank, const BackgroundChain& chain, const State& s);

/// All actions satisfying the ramp, capacity and sum constraints, in
/// lexicographic order. Never empty for a valid state.
std::vector<Action> feasible_actions(const BankConfig& bank, const BackgroundChain& chain, const State& s);

/// Checks ramp, capacity and sum constraints for a single action.
bool is_feasible(const BankConfig& bank, const BackgroundChain& chain, const State& s, const Action& a);

/// Cycling penalty of the post-action occupancies b + a (always <= 0).
/// Requires 0 <= b + a <= capacity; the sum constraint is not re-checked here.
double reward(const BankConfig& bank, const std::vector<int>& b, const Action& a);
inline double reward(const BankConfig& bank, const State& s, const Action& a) { return reward(bank, s.b, a); }

/// Occupancy after the action and one step of storage decay.
std::vector<int> apply_action(const BankConfig& bank, const std::vector<int>& b, const Action& a);

/// Advances one step: the action must be feasible in s, next_x comes from the
/// chain (or a stored trajectory). Returns the next state and the reward.
std::pair<State, double> step(const BankConfig& bank, const BackgroundChain& chain, const State& s, const Action& a,
                              int next_x);

bool is_valid_state(const BankConfig& bank, const BackgroundChain& chain, const State& s);

}  // namespace bbank
