// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bbank/chain.hpp"
#include "bbank/config_io.hpp"
#include "bbank/env.hpp"
#include "bbank/features.hpp"
#include "bbank/harness.hpp"
#include "bbank/learner.hpp"
#include "bbank/oracle.hpp"
#include "reference.hpp"

using namespace bbank;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << o.detail << std::endl;
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};
constexpr std::size_t kHorizon = 100000;

// Relative amount by which `a` exceeds `b`, measured against |b|.
double rel_gain(double a, double b) { return (a - b) / std::abs(b); }

Outcome greedy_optimality() {
    const auto t0 = Clock::now();
    const auto cfg = case_study_config();
    const BankConfig bank = resize_bank(cfg.bank, {2, 3}, std::vector<int>{25, 25});
    const TabularModel model(bank, cfg.chain);
    const double tol = 1e-12;
    const auto sol = solve_q_iteration(model, tol);
    const auto v = evaluate_policy_exact(model, make_policy(PolicyKind::Greedy, bank, cfg.chain).act, tol);
    double gap = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) gap = std::max(gap, std::abs(v[s] - sol.value[s]));
    const double secs = seconds_since(t0);
    return {gap <= 1e-8 && secs < 60.0,
            "max |V_greedy - V*| = " + fmt(gap) + " (<= 1e-8) over " + std::to_string(v.size()) + " states, " +
                fmt(secs, 3) + " s (< 60 s)"};
}

Outcome unconstrained_table() {
    const auto t0 = Clock::now();
    const auto cfg = case_study_config();
    CompareOptions opts;
    opts.sizes = {{2, 3}, {3, 5}, {6, 10}, {10, 10}};
    opts.seeds = kSeeds;
    opts.steps = kHorizon;
    opts.schedule = cfg.schedule;
    const auto table = compare_policies(cfg.bank, cfg.chain, opts);
    bool ok = table.failures.empty();
    std::ostringstream d;
    for (const auto& caps : opts.sizes) {
        const auto* g = table.find(caps, "greedy");
        const auto* n = table.find(caps, "naive");
        const auto* r = table.find(caps, "rl");
        if (!g || !n || !r) {
            ok = false;
            d << format_tuple(caps) << " missing; ";
            continue;
        }
        const bool naive_ok = caps == std::vector<int>{2, 3} || g->mean >= n->mean;
        const double rl_gap = std::abs(r->mean - g->mean) / std::abs(g->mean);
        ok = ok && naive_ok && rl_gap <= 0.02;
        d << format_tuple(caps) << " greedy " << fmt(g->mean, 7) << " naive " << fmt(n->mean, 7) << " rl "
          << fmt(r->mean, 7) << " |rl-greedy| " << fmt(100 * rl_gap, 3) << "%" << (naive_ok ? "" : " greedy<naive")
          << "; ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 900.0;
    d << fmt(secs, 3) << " s (< 900 s)";
    return {ok, d.str()};
}

Outcome constrained_table() {
    const auto cfg = case_study_config();
    CompareOptions opts;
    opts.sizes = {{10, 10}, {15, 15}, {20, 20}};
    opts.ramp = std::vector<int>{2, 2};
    opts.seeds = kSeeds;
    opts.steps = kHorizon;
    opts.schedule = cfg.schedule;
    const auto table = compare_policies(cfg.bank, cfg.chain, opts);
    bool ok = table.failures.empty();
    std::ostringstream d;
    for (const auto& caps : opts.sizes) {
        const auto* g = table.find(caps, "greedy");
        const auto* r = table.find(caps, "rl");
        if (!g || !r) {
            ok = false;
            d << format_tuple(caps) << " missing; ";
            continue;
        }
        const double gain = rel_gain(r->mean, g->mean);
        const bool need5 = caps != std::vector<int>{10, 10};
        ok = ok && r->mean > g->mean && (!need5 || gain >= 0.05);
        d << format_tuple(caps) << " greedy " << fmt(g->mean, 7) << " rl " << fmt(r->mean, 7) << " gain "
          << fmt(100 * gain, 3) << "%" << (need5 ? " (>= 5%)" : " (> 0)") << "; ";
    }
    return {ok, d.str()};
}

Outcome rl_optimality_gap() {
    const auto cfg = case_study_config();
    const BankConfig bank = resize_bank(cfg.bank, {3, 5}, std::vector<int>{2, 2});
    const TabularModel model(bank, cfg.chain);
    const double tol = 1e-12;
    const auto sol = solve_q_iteration(model, tol);
    const auto v_greedy = evaluate_policy_exact(model, make_policy(PolicyKind::Greedy, bank, cfg.chain).act, tol);

    double mean_star = 0.0;
    for (double v : sol.value) mean_star += v;
    mean_star /= static_cast<double>(sol.value.size());

    std::size_t greedy_optimal = 0;
    for (std::size_t s = 0; s < v_greedy.size(); ++s)
        if (std::abs(v_greedy[s] - sol.value[s]) <= 1e-8) ++greedy_optimal;

    // Same training protocol as the comparison harness.
    double mean_gap = 0.0;
    std::size_t violations = 0;
    std::ostringstream per_seed;
    for (std::uint64_t seed : kSeeds) {
        LearnSchedule schedule = cfg.schedule;
        schedule.seed = training_seed(seed);
        const auto w = train(bank, cfg.chain, schedule, cfg.initial_state, bank.start_occupancy()).weights;
        const auto v_rl = evaluate_policy_exact(model, make_policy(PolicyKind::RL, bank, cfg.chain, &w).act, tol);
        double mean_rl = 0.0;
        for (double v : v_rl) mean_rl += v;
        mean_rl /= static_cast<double>(v_rl.size());
        const double gap = (mean_star - mean_rl) / std::abs(mean_star);
        mean_gap += gap / static_cast<double>(kSeeds.size());
        per_seed << fmt(100 * gap, 3) << "% ";
        for (std::size_t s = 0; s < v_rl.size(); ++s)
            if (std::abs(v_greedy[s] - sol.value[s]) <= 1e-8 && v_rl[s] < v_greedy[s] - 1e-8) ++violations;
    }
    const bool ok = mean_gap <= 0.05 && violations == 0;
    return {ok, "state-averaged gap to V* " + fmt(100 * mean_gap, 4) + "% (<= 5%; per seed " + per_seed.str() +
                    "), states below greedy where greedy is optimal: " + std::to_string(violations) + " (greedy optimal on " +
                    std::to_string(greedy_optimal) + "/" + std::to_string(sol.value.size()) + " states)"};
}

Outcome property_suites() {
    std::mt19937 gen(20240601);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
    std::ostringstream d;
    bool ok = true;

    // Enumeration against box filtering.
    int enum_bad = 0;
    for (int inst = 0; inst < 200; ++inst) {
        BankConfig bank;
        const int n = uni(1, 3);
        for (int i = 0; i < n; ++i) bank.batteries.push_back({uni(1, 8), uni(1, 6), 1.0, 1.0, 0.2, 0.8});
        BackgroundChain chain{{"f"}, {{1.0}}, {uni(-12, 12)}};
        State s{0, {}};
        for (const auto& bat : bank.batteries) s.b.push_back(uni(0, bat.capacity));
        if (feasible_actions(bank, chain, s) != reference::brute_force(bank, s, chain.net_gen[0])) ++enum_bad;
    }
    ok = ok && enum_bad == 0;
    d << "enumeration mismatches " << enum_bad << "/200; ";

    // Reward and evolution against the reference formulas.
    const auto cfg = case_study_config();
    int formula_bad = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        BankConfig bank;
        std::vector<int> pct;
        const int n = uni(1, 3);
        for (int i = 0; i < n; ++i) {
            pct.push_back(uni(50, 100));
            const double lower = uni(0, 4) / 10.0;
            bank.batteries.push_back({uni(1, 20), uni(1, 8), pct.back() / 100.0, uni(0, 20) / 10.0, lower,
                                      lower + uni(1, 5) / 10.0});
        }
        State s{uni(0, 3), {}};
        for (const auto& bat : bank.batteries) s.b.push_back(uni(0, bat.capacity));
        const auto actions = feasible_actions(bank, cfg.chain, s);
        const auto& a = actions[static_cast<std::size_t>(uni(0, static_cast<int>(actions.size()) - 1))];
        const double r = reward(bank, s, a), ref = reference::reward(bank, s.b, a.units);
        bool good = std::abs(r - ref) <= 1e-12 * std::max(1.0, std::abs(ref));
        const auto next = apply_action(bank, s.b, a);
        for (int i = 0; i < n; ++i) good = good && next[i] == reference::evolve(pct[i], s.b[i] + a[i]);
        if (!good) ++formula_bad;
    }
    ok = ok && formula_bad == 0;
    d << "reward/evolution mismatches " << formula_bad << "/10000; ";

    // Contraction of the backup. Each sweep may exceed gamma * previous change
    // only by floating-point rounding of the q values themselves.
    double worst_ratio = 0.0, worst_excess = 0.0;
    const BankConfig cbank = resize_bank(cfg.bank, {3, 5}, std::vector<int>{2, 2});
    const TabularModel model(cbank, cfg.chain);
    QTable q(model.num_pairs(), 0.0);
    auto [q1, prev] = bellman_backup(model, q);
    q = std::move(q1);
    bool contracts = true;
    for (int it = 0; it < 300 && prev > 1e-9; ++it) {
        auto [next, delta] = bellman_backup(model, q);
        double scale = 0.0;
        for (double v : next) scale = std::max(scale, std::abs(v));
        const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * scale;
        if (delta > cbank.gamma * prev + rounding) contracts = false;
        worst_ratio = std::max(worst_ratio, delta / prev);
        worst_excess = std::max(worst_excess, delta - cbank.gamma * prev);
        prev = delta;
        q = std::move(next);
    }
    ok = ok && contracts;
    d << "worst sweep ratio " << fmt(worst_ratio, 10) << ", largest excess over gamma * previous " << fmt(worst_excess, 3)
      << " (rounding allowance 64 eps max|q|); ";

    // One weight update by hand: w = 0, beta = 0.1, delta = -1 at an empty (2,3) bank.
    const BankConfig small = resize_bank(cfg.bank, {2, 3}, std::nullopt);
    const auto phi = feature_vector(small, cfg.chain, State{0, {0, 0}}, Action(std::vector<int>{0, 0}));
    WeightVector w(21);
    update_weights(w, phi, -1.0, 0.1);
    std::vector<double> expected(21, 0.0);
    expected[0] = 0.1 * -1.0 * -0.64;
    expected[1] = -0.1;
    expected[2] = 0.1;
    expected[4] = 0.1;
    double upd_err = 0.0;
    for (std::size_t i = 0; i < 21; ++i) upd_err = std::max(upd_err, std::abs(w.w[i] - expected[i]));
    ok = ok && upd_err <= 1e-12;
    d << "update error " << fmt(upd_err, 3) << " (<= 1e-12); ";

    // Chain row frequencies.
    double freq_err = 0.0;
    for (std::size_t x = 0; x < cfg.chain.size(); ++x) {
        Rng rng(derive_seed(99, x));
        std::vector<double> counts(cfg.chain.size(), 0.0);
        for (int i = 0; i < 100000; ++i) counts[sample_next(cfg.chain, static_cast<int>(x), rng)] += 1.0;
        for (std::size_t y = 0; y < cfg.chain.size(); ++y)
            freq_err = std::max(freq_err, std::abs(counts[y] / 100000.0 - cfg.chain.transition[x][y]));
    }
    ok = ok && freq_err <= 0.01;
    d << "max chain frequency error " << fmt(freq_err, 3) << " (<= 0.01)";
    return {ok, d.str()};
}

Outcome feature_dimension_check() {
    const auto cfg = case_study_config();
    const std::size_t d = feature_dimension(cfg.bank, cfg.chain);
    return {d == 21, "d = " + std::to_string(d) + " for N = 2, |S_e| = 4 (expected 21)"};
}

}  // namespace

int main() {
    report(1, "greedy optimal without binding ramps", greedy_optimality());
    report(2, "unconstrained policy table", unconstrained_table());
    report(3, "ramp-constrained policy table", constrained_table());
    report(4, "rl optimality gap against the oracle", rl_optimality_gap());
    report(5, "property suites", property_suites());
    report(6, "feature dimension", feature_dimension_check());
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
