#include "bbank/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bbank/config_io.hpp"
#include "bbank/env.hpp"
#include "bbank/rng.hpp"

namespace bbank {

const PolicyTotals& EvalReport::at(const std::string& policy) const {
    for (const auto& r : results)
        if (r.policy == policy) return r;
    throw std::out_of_range("EvalReport: no policy " + policy);
}

EvalReport coupled_rollout(const BankConfig& bank, const BackgroundChain& chain, const std::vector<NamedPolicy>& policies,
                           const Trajectory& traj, const std::vector<int>& b0) {
    if (traj.x_path.empty()) throw std::invalid_argument("coupled_rollout: empty trajectory");
    EvalReport report;
    report.trajectory_seed = traj.seed;
    report.steps = traj.steps();
    report.fingerprint = config_fingerprint(bank, chain);

    for (const auto& policy : policies) {
        PolicyTotals totals;
        totals.policy = policy.name;
        State s{traj.x_path[0], b0};
        for (std::size_t k = 0; k < report.steps; ++k) {
            const Action a = policy.act(s);
            auto [next, r] = step(bank, chain, s, a, traj.x_path[k + 1]);
            totals.total_reward += r;
            if (r < 0.0) ++totals.penalty_events;
            s = std::move(next);
        }
        totals.mean_reward = report.steps ? totals.total_reward / static_cast<double>(report.steps) : 0.0;
        report.results.push_back(std::move(totals));
    }
    return report;
}

const ComparisonRow* ComparisonTable::find(const std::vector<int>& capacities, const std::string& policy) const {
    for (const auto& row : rows)
        if (row.capacities == capacities && row.policy == policy) return &row;
    return nullptr;
}

BankConfig resize_bank(const BankConfig& base, const std::vector<int>& capacities,
                       const std::optional<std::vector<int>>& ramp) {
    if (capacities.size() != base.size())
        throw std::invalid_argument("size tuple " + format_tuple(capacities) + " does not match " +
                                    std::to_string(base.size()) + " batteries");
    if (ramp && ramp->size() != base.size())
        throw std::invalid_argument("ramp tuple " + format_tuple(*ramp) + " does not match the bank");
    BankConfig bank = base;
    bank.initial_occupancy.reset();
    for (std::size_t i = 0; i < bank.size(); ++i) {
        bank.batteries[i].capacity = capacities[i];
        if (ramp) bank.batteries[i].ramp = (*ramp)[i];
    }
    return bank;
}

std::uint64_t training_seed(std::uint64_t eval_seed) { return derive_seed(eval_seed, 0x7261696eULL); }

namespace {

void summarize(ComparisonRow& row) {
    const double n = static_cast<double>(row.totals.size());
    double sum = 0.0;
    for (double t : row.totals) sum += t;
    row.mean = n > 0 ? sum / n : 0.0;
    double ss = 0.0;
    for (double t : row.totals) ss += (t - row.mean) * (t - row.mean);
    row.stddev = row.totals.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

}  // namespace

ComparisonTable compare_policies(const BankConfig& base, const BackgroundChain& chain, const CompareOptions& options) {
    ComparisonTable table;
    table.seeds = options.seeds;
    table.steps = options.steps;

    const PolicyKind kinds[] = {PolicyKind::Greedy, PolicyKind::Naive, PolicyKind::RL};

    for (const auto& sizes : options.sizes) {
        try {
            const BankConfig bank = resize_bank(base, sizes, options.ramp);
            const ValidationReport report = validate_config(bank, chain);
            if (!report.ok()) throw std::invalid_argument("invalid config: " + report.to_string());
            if (options.weights && options.weights_fingerprint != config_fingerprint(bank, chain))
                throw std::invalid_argument("supplied weights were trained for a different config");

            std::vector<ComparisonRow> rows;
            for (PolicyKind kind : kinds) rows.push_back({sizes, std::string(policy_name(kind)), 0.0, 0.0, {}});

            const std::vector<int> b0 = bank.start_occupancy();
            for (std::uint64_t seed : options.seeds) {
                WeightVector weights;
                if (options.weights) {
                    weights = *options.weights;
                } else {
                    LearnSchedule schedule = options.schedule;
                    schedule.seed = training_seed(seed);
                    weights = train(bank, chain, schedule, options.initial_state, b0).weights;
                }
                std::vector<NamedPolicy> policies;
                for (PolicyKind kind : kinds) policies.push_back(make_policy(kind, bank, chain, &weights));
                const Trajectory traj = generate_trajectory(chain, options.initial_state, options.steps, seed);
                const EvalReport eval = coupled_rollout(bank, chain, policies, traj, b0);
                for (std::size_t p = 0; p < rows.size(); ++p) rows[p].totals.push_back(eval.results[p].total_reward);
            }
            for (auto& row : rows) {
                summarize(row);
                table.rows.push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            table.failures.push_back({sizes, e.what()});
        }
    }
    return table;
}

namespace {

std::string joined(const std::vector<int>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

}  // namespace

void write_comparison_csv(std::ostream& os, const ComparisonTable& table) {
    os << "capacities,policy,seed_mean,seed_stddev,totals\n";
    const auto old_precision = os.precision(12);
    for (const auto& row : table.rows) {
        os << '"' << joined(row.capacities, ',') << "\"," << row.policy << ',' << row.mean << ',' << row.stddev << ',';
        for (std::size_t i = 0; i < row.totals.size(); ++i) os << (i ? ";" : "") << row.totals[i];
        os << '\n';
    }
    os.precision(old_precision);
}

void write_comparison_text(std::ostream& os, const ComparisonTable& table) {
    os << "T = " << table.steps << ", seeds = " << table.seeds.size() << " (mean +/- sample stddev of total reward)\n";
    os << std::left << std::setw(12) << "B" << std::right << std::setw(26) << "greedy" << std::setw(26) << "naive"
       << std::setw(26) << "rl" << '\n';
    std::vector<std::vector<int>> seen;
    for (const auto& row : table.rows) {
        if (std::find(seen.begin(), seen.end(), row.capacities) != seen.end()) continue;
        seen.push_back(row.capacities);
        os << std::left << std::setw(12) << joined(row.capacities, ',') << std::right;
        for (const char* name : {"greedy", "naive", "rl"}) {
            std::ostringstream cell;
            if (const auto* r = table.find(row.capacities, name))
                cell << std::fixed << std::setprecision(1) << r->mean << " +/- " << r->stddev;
            os << std::setw(26) << cell.str();
        }
        os << '\n';
    }
    for (const auto& f : table.failures) os << "FAILED " << joined(f.capacities, ',') << ": " << f.message << '\n';
}

void write_eval_report_csv(std::ostream& os, const EvalReport& report) {
    os << "policy,total_reward,mean_reward,penalty_events,trajectory_seed,steps,fingerprint\n";
    const auto old_precision = os.precision(12);
    for (const auto& r : report.results)
        os << r.policy << ',' << r.total_reward << ',' << r.mean_reward << ',' << r.penalty_events << ','
           << report.trajectory_seed << ',' << report.steps << ',' << report.fingerprint << '\n';
    os.precision(old_precision);
}

}  // namespace bbank
