#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "bbank/core.hpp"
#include "bbank/features.hpp"
#include "bbank/rng.hpp"

namespace bbank {

// Every argmax below returns the lexicographically smallest maximizer.

Action greedy_action(const BankConfig& bank, const BackgroundChain& chain, const State& s);

/// Splits the clipped net generation in proportion to capacity, rounding to
/// nearest (ties toward zero). When the rounded split is infeasible, returns
/// the feasible action closest to the unrounded split in L1.
Action naive_action(const BankConfig& bank, const BackgroundChain& chain, const State& s);

Action rl_action(const BankConfig& bank, const BackgroundChain& chain, const State& s, const WeightVector& w);

Action epsilon_greedy_action(const BankConfig& bank, const BackgroundChain& chain, const State& s,
                             const WeightVector& w, double eps, Rng& rng);

enum class PolicyKind { Greedy, Naive, RL };

std::string_view policy_name(PolicyKind kind);
std::optional<PolicyKind> parse_policy(std::string_view name);

/// Deterministic stationary policy.
using Policy = std::function<Action(const State&)>;

struct NamedPolicy {
    std::string name;
    Policy act;
};

/// Binds a policy to its configuration. The bank, chain and weights are
/// captured by reference and must outlive the returned policy. `weights` is
/// required for PolicyKind::RL and ignored otherwise.
NamedPolicy make_policy(PolicyKind kind, const BankConfig& bank, const BackgroundChain& chain,
                        const WeightVector* weights = nullptr);

}  // namespace bbank
