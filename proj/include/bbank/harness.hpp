#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bbank/chain.hpp"
#include "bbank/core.hpp"
#include "bbank/features.hpp"
#include "bbank/learner.hpp"
#include "bbank/policies.hpp"

namespace bbank {

struct PolicyTotals {
    std::string policy;
    double total_reward = 0.0;    // undiscounted sum over the T steps
    double mean_reward = 0.0;     // per step; 0 when T = 0
    std::uint64_t penalty_events = 0;  // steps with strictly negative reward
};

/// All policies in one report consumed the same background path.
struct EvalReport {
    std::uint64_t trajectory_seed = 0;
    std::size_t steps = 0;
    std::string fingerprint;
    std::vector<PolicyTotals> results;

    const PolicyTotals& at(const std::string& policy) const;
};

/// Runs each policy from (traj.x_path[0], b0) along the stored path.
EvalReport coupled_rollout(const BankConfig& bank, const BackgroundChain& chain, const std::vector<NamedPolicy>& policies,
                           const Trajectory& traj, const std::vector<int>& b0);

struct CompareOptions {
    std::vector<std::vector<int>> sizes;  // capacity tuples, one row group each
    std::optional<std::vector<int>> ramp; // overrides every battery's ramp when set
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::size_t steps = 100000;           // evaluation horizon T
    LearnSchedule schedule;               // training schedule; its seed is replaced per evaluation seed
    int initial_state = 0;
    /// Pre-trained weights used instead of training, for rows whose config
    /// fingerprint matches `weights_fingerprint`. Other rows fail.
    std::optional<WeightVector> weights;
    std::string weights_fingerprint;
};

struct ComparisonRow {
    std::vector<int> capacities;
    std::string policy;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single seed
    std::vector<double> totals;  // per seed, in CompareOptions::seeds order
};

struct RowFailure {
    std::vector<int> capacities;
    std::string message;
};

struct ComparisonTable {
    std::vector<std::uint64_t> seeds;
    std::size_t steps = 0;
    std::vector<ComparisonRow> rows;
    std::vector<RowFailure> failures;

    const ComparisonRow* find(const std::vector<int>& capacities, const std::string& policy) const;
};

/// The bank for one table row: capacities replaced, ramps optionally
/// overridden, initial occupancy reset to half capacity.
BankConfig resize_bank(const BankConfig& base, const std::vector<int>& capacities,
                       const std::optional<std::vector<int>>& ramp);

/// Seed of the training run paired with evaluation seed `eval_seed`.
std::uint64_t training_seed(std::uint64_t eval_seed);

/// For every size and seed: train the RL weights (or reuse supplied ones),
/// then evaluate greedy, naive and rl on one coupled trajectory drawn with
/// that seed. A failing size is reported in `failures` and skipped.
ComparisonTable compare_policies(const BankConfig& base, const BackgroundChain& chain, const CompareOptions& options);

/// Columns: capacities,policy,seed_mean,seed_stddev,totals (totals separated by ';').
void write_comparison_csv(std::ostream& os, const ComparisonTable& table);
void write_comparison_text(std::ostream& os, const ComparisonTable& table);

void write_eval_report_csv(std::ostream& os, const EvalReport& report);

}  // namespace bbank
