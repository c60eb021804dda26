#include "bbank/chain.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bbank {

int sample_next(const BackgroundChain& chain, int x, Rng& rng) {
    const auto& row = chain.transition.at(static_cast<std::size_t>(x));
    const double u = rng.uniform01();
    double cum = 0.0;
    int last_positive = -1;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] <= 0.0) continue;
        cum += row[j];
        last_positive = static_cast<int>(j);
        if (u < cum) return last_positive;
    }
    // u landed in the rounding slack above the accumulated row sum.
    if (last_positive < 0) throw std::logic_error("sample_next: row has no positive entry");
    return last_positive;
}

Trajectory generate_trajectory(const BackgroundChain& chain, int x0, std::size_t steps, std::uint64_t seed) {
    if (x0 < 0 || static_cast<std::size_t>(x0) >= chain.size())
        throw std::out_of_range("generate_trajectory: initial state out of range");
    Trajectory traj;
    traj.seed = seed;
    traj.x_path.reserve(steps + 1);
    traj.x_path.push_back(x0);
    Rng rng(seed);
    int x = x0;
    for (std::size_t k = 0; k < steps; ++k) {
        x = sample_next(chain, x, rng);
        traj.x_path.push_back(x);
    }
    return traj;
}

std::vector<double> stationary_distribution(const BackgroundChain& chain, double tol) {
    const std::size_t n = chain.size();
    std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
    for (int iter = 0; iter < 1000000; ++iter) {
        for (std::size_t j = 0; j < n; ++j) next[j] = 0.5 * pi[j];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) next[j] += 0.5 * pi[i] * chain.transition[i][j];
        double diff = 0.0;
        for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
        pi.swap(next);
        if (diff < tol) break;
    }
    return pi;
}

void write_trajectory(std::ostream& os, const Trajectory& traj) {
    os << "# seed=" << traj.seed << " T=" << traj.steps() << '\n';
    for (int x : traj.x_path) os << x << '\n';
}

Trajectory read_trajectory(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("trajectory: missing header");
    Trajectory traj;
    std::size_t steps = 0;
    {
        std::istringstream hs(header);
        std::string hash, seed_tok, t_tok;
        hs >> hash >> seed_tok >> t_tok;
        if (hash != "#" || seed_tok.rfind("seed=", 0) != 0 || t_tok.rfind("T=", 0) != 0)
            throw std::runtime_error("trajectory: malformed header '" + header + "'");
        traj.seed = std::stoull(seed_tok.substr(5));
        steps = std::stoull(t_tok.substr(2));
    }
    int x;
    while (is >> x) traj.x_path.push_back(x);
    if (traj.x_path.size() != steps + 1)
        throw std::runtime_error("trajectory: expected " + std::to_string(steps + 1) + " states, read " +
                                 std::to_string(traj.x_path.size()));
    return traj;
}

}  // namespace bbank
