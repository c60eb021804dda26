#include "bbank/policies.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bbank/env.hpp"

namespace bbank {

namespace {

template <typename Score>
Action first_argmax(const std::vector<Action>& actions, Score score) {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const double v = score(actions[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return actions.at(best);
}

}  // namespace

Action greedy_action(const BankConfig& bank, const BackgroundChain& chain, const State& s) {
    return first_argmax(feasible_actions(bank, chain, s), [&](const Action& a) { return reward(bank, s.b, a); });
}

Action naive_action(const BankConfig& bank, const BackgroundChain& chain, const State& s) {
    const std::size_t n = bank.size();
    const long long target = action_bounds(bank, chain, s).target;
    long long total_capacity = 0;
    for (const auto& bat : bank.batteries) total_capacity += bat.capacity;

    // Proportional share of battery i is share[i] / total_capacity, kept as an
    // integer numerator so rounding ties and distance ties are exact.
    std::vector<long long> share(n);
    std::vector<int> rounded(n);
    for (std::size_t i = 0; i < n; ++i) {
        share[i] = target * bank.batteries[i].capacity;
        const long long q = share[i] / total_capacity;
        const long long r = share[i] % total_capacity;
        const long long away = r > 0 ? 1 : (r < 0 ? -1 : 0);
        rounded[i] = static_cast<int>(2 * std::llabs(r) > total_capacity ? q + away : q);
    }

    Action candidate(rounded);
    if (is_feasible(bank, chain, s, candidate)) return candidate;

    const auto actions = feasible_actions(bank, chain, s);
    std::size_t best = 0;
    long long best_dist = std::numeric_limits<long long>::max();
    for (std::size_t k = 0; k < actions.size(); ++k) {
        long long dist = 0;
        for (std::size_t i = 0; i < n; ++i) dist += std::llabs(actions[k][i] * total_capacity - share[i]);
        if (dist < best_dist) {
            best_dist = dist;
            best = k;
        }
    }
    return actions.at(best);
}

Action rl_action(const BankConfig& bank, const BackgroundChain& chain, const State& s, const WeightVector& w) {
    if (w.dimension() != feature_dimension(bank, chain))
        throw std::invalid_argument("rl_action: weight dimension does not match the config");
    return first_argmax(feasible_actions(bank, chain, s),
                        [&](const Action& a) { return q_hat(feature_vector(bank, chain, s, a), w); });
}

Action epsilon_greedy_action(const BankConfig& bank, const BackgroundChain& chain, const State& s,
                             const WeightVector& w, double eps, Rng& rng) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon_greedy_action: eps outside [0, 1]");
    if (rng.uniform01() < eps) {
        const auto actions = feasible_actions(bank, chain, s);
        return actions[rng.uniform_index(actions.size())];
    }
    return rl_action(bank, chain, s, w);
}

std::string_view policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Greedy: return "greedy";
        case PolicyKind::Naive: return "naive";
        case PolicyKind::RL: return "rl";
    }
    return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
    if (name == "greedy") return PolicyKind::Greedy;
    if (name == "naive") return PolicyKind::Naive;
    if (name == "rl") return PolicyKind::RL;
    return std::nullopt;
}

NamedPolicy make_policy(PolicyKind kind, const BankConfig& bank, const BackgroundChain& chain,
                        const WeightVector* weights) {
    const std::string name(policy_name(kind));
    switch (kind) {
        case PolicyKind::Greedy:
            return {name, [&bank, &chain](const State& s) { return greedy_action(bank, chain, s); }};
        case PolicyKind::Naive:
            return {name, [&bank, &chain](const State& s) { return naive_action(bank, chain, s); }};
        case PolicyKind::RL:
            if (!weights) throw std::invalid_argument("make_policy: rl policy needs weights");
            if (weights->dimension() != feature_dimension(bank, chain))
                throw std::invalid_argument("make_policy: weight dimension does not match the config");
            return {name, [&bank, &chain, weights](const State& s) { return rl_action(bank, chain, s, *weights); }};
    }
    throw std::logic_error("make_policy: unknown kind");
}

}  // namespace bbank
