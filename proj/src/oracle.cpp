#include "bbank/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "bbank/env.hpp"

namespace bbank {

StateCapExceeded::StateCapExceeded(std::size_t n, std::size_t cap)
    : std::runtime_error("state space has " + std::to_string(n) + " states, above the cap of " + std::to_string(cap)),
      states(n) {}

SolverDidNotConverge::SolverDidNotConverge(std::size_t sweeps, double r)
    : std::runtime_error("no convergence after " + std::to_string(sweeps) + " sweeps (residual " + std::to_string(r) +
                         ")"),
      residual(r) {}

StateSpace::StateSpace(const BankConfig& bank, const BackgroundChain& chain, std::size_t cap)
    : capacities_(bank.capacities()), num_bg_(chain.size()) {
    // Saturating product so huge banks report a size instead of overflowing.
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max() / 2;
    std::size_t total = num_bg_;
    for (int c : capacities_) {
        const auto radix = static_cast<std::size_t>(c) + 1;
        num_occ_ = num_occ_ > kMax / radix ? kMax : num_occ_ * radix;
        total = total > kMax / radix ? kMax : total * radix;
    }
    if (total > cap) throw StateCapExceeded(total, cap);
}

std::size_t StateSpace::occupancy_index(const std::vector<int>& b) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < capacities_.size(); ++i) idx = idx * (capacities_[i] + 1) + static_cast<std::size_t>(b[i]);
    return idx;
}

State StateSpace::state(std::size_t idx) const {
    State s;
    s.x = static_cast<int>(idx / num_occ_);
    std::size_t rest = idx % num_occ_;
    s.b.assign(capacities_.size(), 0);
    for (std::size_t i = capacities_.size(); i-- > 0;) {
        const auto radix = static_cast<std::size_t>(capacities_[i]) + 1;
        s.b[i] = static_cast<int>(rest % radix);
        rest /= radix;
    }
    return s;
}

TabularModel::TabularModel(const BankConfig& bank, const BackgroundChain& chain, std::size_t cap)
    : space_(bank, chain, cap), gamma_(bank.gamma), transition_(chain.transition) {
    offsets_.reserve(space_.size() + 1);
    offsets_.push_back(0);
    for (std::size_t idx = 0; idx < space_.size(); ++idx) {
        const State s = space_.state(idx);
        for (auto& a : feasible_actions(bank, chain, s)) {
            rewards_.push_back(bbank::reward(bank, s.b, a));
            next_occ_.push_back(space_.occupancy_index(apply_action(bank, s.b, a)));
            actions_.push_back(std::move(a));
        }
        offsets_.push_back(actions_.size());
    }
}

double TabularModel::expected_next_value(std::size_t s, std::size_t pair, const std::vector<double>& v) const {
    const auto& row = transition_[s / space_.num_occupancies()];
    const std::size_t nb = next_occ_[pair];
    const std::size_t stride = space_.num_occupancies();
    double ev = 0.0;
    for (std::size_t x = 0; x < row.size(); ++x)
        if (row[x] != 0.0) ev += row[x] * v[x * stride + nb];
    return ev;
}

std::size_t TabularModel::pair_of(std::size_t s, const Action& a) const {
    for (std::size_t p = first_pair(s); p < end_pair(s); ++p)
        if (actions_[p] == a) return p;
    throw std::invalid_argument("policy returned infeasible action " + format_tuple(a.units) + " in state " +
                                std::to_string(s));
}

std::vector<double> state_values(const TabularModel& model, const QTable& q) {
    std::vector<double> v(model.num_states());
    for (std::size_t s = 0; s < v.size(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t p = model.first_pair(s); p < model.end_pair(s); ++p) best = std::max(best, q[p]);
        v[s] = best;
    }
    return v;
}

std::pair<QTable, double> bellman_backup(const TabularModel& model, const QTable& q) {
    const std::vector<double> v = state_values(model, q);
    QTable next(q.size());
    double delta = 0.0;
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        for (std::size_t p = model.first_pair(s); p < model.end_pair(s); ++p) {
            next[p] = model.reward(p) + model.gamma() * model.expected_next_value(s, p, v);
            delta = std::max(delta, std::abs(next[p] - q[p]));
        }
    }
    return {std::move(next), delta};
}

ExactSolution solve_q_iteration(const TabularModel& model, double tol, std::size_t max_sweeps) {
    ExactSolution sol;
    sol.tol = tol;
    sol.q.assign(model.num_pairs(), 0.0);
    for (;;) {
        if (sol.iterations >= max_sweeps) throw SolverDidNotConverge(sol.iterations, sol.residual);
        auto [next, delta] = bellman_backup(model, sol.q);
        sol.q = std::move(next);
        sol.residual = delta;
        ++sol.iterations;
        if (delta <= tol) break;
    }
    sol.value = state_values(model, sol.q);
    sol.best_pair.resize(model.num_states());
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        std::size_t best = model.first_pair(s);
        for (std::size_t p = best + 1; p < model.end_pair(s); ++p)
            if (sol.q[p] > sol.q[best]) best = p;
        sol.best_pair[s] = best;
    }
    return sol;
}

std::vector<double> evaluate_policy_exact(const TabularModel& model, const Policy& policy, double tol,
                                          std::size_t max_sweeps) {
    const std::size_t n = model.num_states();
    std::vector<std::size_t> chosen(n);
    for (std::size_t s = 0; s < n; ++s) chosen[s] = model.pair_of(s, policy(model.space().state(s)));

    std::vector<double> v(n, 0.0), next(n);
    for (std::size_t sweep = 0;; ++sweep) {
        if (sweep >= max_sweeps) throw SolverDidNotConverge(sweep, std::numeric_limits<double>::quiet_NaN());
        double delta = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            next[s] = model.reward(chosen[s]) + model.gamma() * model.expected_next_value(s, chosen[s], v);
            delta = std::max(delta, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (delta <= tol) break;
    }
    return v;
}

namespace {

std::string csv_tuple(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s + ")";
}

}  // namespace

void write_solution_csv(std::ostream& os, const TabularModel& model, const ExactSolution& sol) {
    os << "state_index,x,b,best_action,value\n";
    const auto old_precision = os.precision(17);
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        const State st = model.space().state(s);
        os << s << ',' << st.x << ',' << csv_tuple(st.b) << ',' << csv_tuple(model.action(sol.best_pair[s]).units) << ','
           << sol.value[s] << '\n';
    }
    os.precision(old_precision);
}

}  // namespace bbank
