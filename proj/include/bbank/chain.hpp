#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bbank/core.hpp"
#include "bbank/rng.hpp"

namespace bbank {

struct Trajectory {
    std::uint64_t seed = 0;
    std::vector<int> x_path;  // length T + 1

    std::size_t steps() const { return x_path.empty() ? 0 : x_path.size() - 1; }
};

int sample_next(const BackgroundChain& chain, int x, Rng& rng);

Trajectory generate_trajectory(const BackgroundChain& chain, int x0, std::size_t steps, std::uint64_t seed);

inline int net_generation(const BackgroundChain& chain, int x) { return chain.net_gen.at(static_cast<std::size_t>(x)); }

/// Stationary distribution by power iteration on the lazy chain (I + P) / 2,
/// which converges for any irreducible P, periodic or not.
std::vector<double> stationary_distribution(const BackgroundChain& chain, double tol = 1e-14);

// Flat text export: "# seed=<seed> T=<steps>" header, then one state index per line.
void write_trajectory(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory(std::istream& is);

}  // namespace bbank
