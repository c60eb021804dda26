#include "bbank/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "bbank/chain.hpp"
#include "bbank/env.hpp"
#include "bbank/policies.hpp"
#include "bbank/rng.hpp"

namespace bbank {

double LearnSchedule::epsilon(std::uint64_t k) const {
    return std::max(eps_min, eps0 * std::exp(-static_cast<double>(k) / eps_decay));
}

ValidationReport validate_schedule(const LearnSchedule& schedule) {
    ValidationReport report;
    auto fail = [&](const char* path, const char* msg) { report.violations.push_back({path, msg}); };
    if (!(schedule.beta0 > 0.0 && schedule.beta0 < 1.0)) fail("schedule.beta0", "0 < beta0 < 1");
    if (!(schedule.beta_tau > 0.0)) fail("schedule.beta_tau", "beta_tau > 0");
    if (!(schedule.eps0 >= 0.0 && schedule.eps0 <= 1.0)) fail("schedule.eps0", "0 <= eps0 <= 1");
    if (!(schedule.eps_min >= 0.0 && schedule.eps_min <= 1.0)) fail("schedule.eps_min", "0 <= eps_min <= 1");
    if (!(schedule.eps_min <= schedule.eps0)) fail("schedule", "eps_min <= eps0");
    if (!(schedule.eps_decay > 0.0)) fail("schedule.eps_decay", "eps_decay > 0");
    return report;
}

namespace {

double max_q(const BankConfig& bank, const BackgroundChain& chain, const State& s, const WeightVector& w) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : feasible_actions(bank, chain, s)) best = std::max(best, q_hat(feature_vector(bank, chain, s, a), w));
    return best;
}

}  // namespace

double td_error(const BankConfig& bank, const BackgroundChain& chain, const State& s, const Action& a,
                const State& s_next, const WeightVector& w) {
    const FeatureVector phi = feature_vector(bank, chain, s, a);
    return phi.reward() + bank.gamma * max_q(bank, chain, s_next, w) - q_hat(phi, w);
}

void update_weights(WeightVector& w, const FeatureVector& phi, double delta, double beta) {
    if (phi.dimension() != w.dimension()) throw std::invalid_argument("update_weights: dimension mismatch");
    const double scale = beta * delta;
    w.w[0] += scale * phi.reward();
    const std::size_t off = phi.block_offset();
    const auto& vals = phi.block_values();
    for (std::size_t j = 0; j < vals.size(); ++j) w.w[off + j] += scale * vals[j];
}

TrainResult train(const BankConfig& bank, const BackgroundChain& chain, const LearnSchedule& schedule, int x0,
                  const std::vector<int>& b0) {
    TrainResult result{WeightVector(feature_dimension(bank, chain)), TrainLog{}};
    WeightVector& w = result.weights;
    TrainLog& log = result.log;

    // Separate streams so exploration draws never perturb the background path.
    Rng chain_rng(derive_seed(schedule.seed, 0));
    Rng explore_rng(derive_seed(schedule.seed, 1));

    State s{x0, b0};
    double cum_reward = 0.0;
    double window_abs_td = 0.0;
    std::uint64_t window_count = 0;

    for (std::uint64_t k = 0; k < schedule.steps; ++k) {
        const double eps = schedule.epsilon(k);
        const double beta = schedule.beta(k);

        const Action a = epsilon_greedy_action(bank, chain, s, w, eps, explore_rng);
        const int next_x = sample_next(chain, s.x, chain_rng);
        auto [s_next, r] = step(bank, chain, s, a, next_x);

        const FeatureVector phi = feature_vector(bank, chain, s, a);
        const double delta = r + bank.gamma * max_q(bank, chain, s_next, w) - q_hat(phi, w);
        update_weights(w, phi, delta, beta);

        if (!std::isfinite(delta) || !w.all_finite())
            throw std::runtime_error("train: non-finite weights at step " + std::to_string(k) +
                                     " (reduce beta0 or check the config)");

        cum_reward += r;
        window_abs_td += std::abs(delta);
        ++window_count;
        if ((k + 1) % log.interval == 0 || k + 1 == schedule.steps) {
            log.entries.push_back({k + 1, eps, beta, window_abs_td / static_cast<double>(window_count), cum_reward});
            window_abs_td = 0.0;
            window_count = 0;
        }
        s = std::move(s_next);
    }
    return result;
}

void write_train_log_csv(std::ostream& os, const TrainLog& log) {
    os << "step,epsilon,beta,mean_abs_td,cum_reward\n";
    const auto old_precision = os.precision(10);
    for (const auto& e : log.entries)
        os << e.step << ',' << e.epsilon << ',' << e.beta << ',' << e.mean_abs_td << ',' << e.cum_reward << '\n';
    os.precision(old_precision);
}

}  // namespace bbank
