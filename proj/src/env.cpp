#include "bbank/env.hpp"

#include "bbank/chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace bbank {

namespace {

void check_sizes(const BankConfig& bank, const std::vector<int>& b, const Action& a) {
    if (b.size() != bank.size() || a.size() != bank.size())
        throw std::invalid_argument("action/occupancy length does not match the bank");
}

void check_post_bounds(const BankConfig& bank, const std::vector<int>& b, const Action& a) {
    check_sizes(bank, b, a);
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const int post = b[i] + a[i];
        if (post < 0 || post > bank.batteries[i].capacity)
            throw std::invalid_argument("action drives battery " + std::to_string(i) + " outside [0, capacity]");
    }
}

}  // namespace

ActionBounds action_bounds(const BankConfig& bank, const State& s, int net_gen) {
    ActionBounds bounds;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const auto& bat = bank.batteries[i];
        bounds.lo -= std::min(s.b[i], bat.ramp);
        bounds.hi += std::min(bat.capacity - s.b[i], bat.ramp);
    }
    bounds.target = clip(net_gen, bounds.lo, bounds.hi);
    return bounds;
}

ActionBounds action_bounds(const BankConfig& bank, const BackgroundChain& chain, const State& s) {
    return action_bounds(bank, s, net_generation(chain, s.x));
}

std::vector<Action> feasible_actions(const BankConfig& bank, const BackgroundChain& chain, const State& s) {
    const std::size_t n = bank.size();
    const ActionBounds bounds = action_bounds(bank, chain, s);

    // Per-battery interval and suffix sums of the interval ends, so each prefix
    // only takes values the remaining batteries can still complete.
    std::vector<int> lo(n), hi(n), suffix_lo(n + 1, 0), suffix_hi(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& bat = bank.batteries[i];
        lo[i] = std::max(-bat.ramp, -s.b[i]);
        hi[i] = std::min(bat.ramp, bat.capacity - s.b[i]);
    }
    for (std::size_t i = n; i-- > 0;) {
        suffix_lo[i] = suffix_lo[i + 1] + lo[i];
        suffix_hi[i] = suffix_hi[i + 1] + hi[i];
    }

    std::vector<Action> out;
    std::vector<int> current(n, 0);
    auto recurse = [&](auto&& self, std::size_t i, int remaining) -> void {
        if (i == n) {
            if (remaining == 0) out.emplace_back(current);
            return;
        }
        const int first = std::max(lo[i], remaining - suffix_hi[i + 1]);
        const int last = std::min(hi[i], remaining - suffix_lo[i + 1]);
        for (int v = first; v <= last; ++v) {
            current[i] = v;
            self(self, i + 1, remaining - v);
        }
    };
    recurse(recurse, 0, bounds.target);
    return out;
}

bool is_feasible(const BankConfig& bank, const BackgroundChain& chain, const State& s, const Action& a) {
    if (a.size() != bank.size() || s.b.size() != bank.size()) return false;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const auto& bat = bank.batteries[i];
        if (std::abs(a[i]) > bat.ramp) return false;
        if (s.b[i] + a[i] < 0 || s.b[i] + a[i] > bat.capacity) return false;
    }
    return a.sum() == action_bounds(bank, chain, s).target;
}

double reward(const BankConfig& bank, const std::vector<int>& b, const Action& a) {
    check_post_bounds(bank, b, a);
    double penalty = 0.0;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const auto& bat = bank.batteries[i];
        const double post = b[i] + a[i];
        const double under = std::max(bat.lower_frac * bat.capacity - post, 0.0);
        const double over = std::max(post - bat.upper_frac * bat.capacity, 0.0);
        penalty += bat.penalty_weight * (under + over);
    }
    return -penalty;
}

std::vector<int> apply_action(const BankConfig& bank, const std::vector<int>& b, const Action& a) {
    check_post_bounds(bank, b, a);
    std::vector<int> next(bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const double eta = bank.batteries[i].dissipation;
        const int post = b[i] + a[i];
        // The 1e-9 slack keeps products such as 0.7 * 10 from flooring to 6.
        next[i] = eta == 1.0 ? post : static_cast<int>(std::floor(eta * post + 1e-9));
    }
    return next;
}

std::pair<State, double> step(const BankConfig& bank, const BackgroundChain& chain, const State& s, const Action& a,
                              int next_x) {
    if (!is_feasible(bank, chain, s, a)) throw std::invalid_argument("step: infeasible action " + format_tuple(a.units));
    if (next_x < 0 || static_cast<std::size_t>(next_x) >= chain.size())
        throw std::out_of_range("step: next background state out of range");
    return {State{next_x, apply_action(bank, s.b, a)}, reward(bank, s.b, a)};
}

bool is_valid_state(const BankConfig& bank, const BackgroundChain& chain, const State& s) {
    if (s.x < 0 || static_cast<std::size_t>(s.x) >= chain.size()) return false;
    if (s.b.size() != bank.size()) return false;
    for (std::size_t i = 0; i < bank.size(); ++i)
        if (s.b[i] < 0 || s.b[i] > bank.batteries[i].capacity) return false;
    return true;
}

}  // namespace bbank
