#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bbank/core.hpp"

namespace bbank {

/// Feature dimension (2N + 1) * |S_e| + 1.
std::size_t feature_dimension(std::size_t num_batteries, std::size_t num_bg_states);
std::size_t feature_dimension(const BankConfig& bank, const BackgroundChain& chain);

/// Sparse view of phi(s, a): entry 0 carries the instantaneous reward, and
/// only the block owned by the background state x is non-zero. That block is
/// (1, -(1-y_1)^4, -y_1^4, ..., -(1-y_N)^4, -y_N^4) where y_i is the
/// post-action normalized occupancy of battery i.
class FeatureVector {
public:
    FeatureVector(std::size_t dimension, double reward, std::size_t block, std::vector<double> block_values);

    std::size_t dimension() const { return dimension_; }
    double reward() const { return reward_; }
    std::size_t block() const { return block_; }
    std::size_t block_offset() const { return 1 + block_ * block_values_.size(); }
    const std::vector<double>& block_values() const { return block_values_; }

    double operator[](std::size_t i) const;
    std::vector<double> dense() const;

private:
    std::size_t dimension_;
    double reward_;
    std::size_t block_;
    std::vector<double> block_values_;
};

struct WeightVector {
    std::vector<double> w;

    WeightVector() = default;
    explicit WeightVector(std::size_t d) : w(d, 0.0) {}
    explicit WeightVector(std::vector<double> values) : w(std::move(values)) {}

    std::size_t dimension() const { return w.size(); }
    bool all_finite() const;
};

std::vector<double> normalized_occupancy(const BankConfig& bank, const std::vector<int>& b, const Action& a);

/// (-(1-y)^4, -y^4); each term lies in [-1, 0] for y in [0, 1].
std::pair<double, double> kernel_pair(double y);

FeatureVector feature_vector(const BankConfig& bank, const BackgroundChain& chain, const State& s, const Action& a);

/// phi . w, touching only the non-zero entries of phi.
double q_hat(const FeatureVector& phi, const WeightVector& w);

// Weight file: {"version", "fingerprint", "d", "N", "num_bg_states", "weights"}.
inline constexpr int kWeightFileVersion = 1;

void save_weights(std::ostream& os, const WeightVector& w, std::size_t num_batteries, std::size_t num_bg_states,
                  const std::string& fingerprint);

/// Throws std::runtime_error when the file is malformed, the version is
/// unknown, or the fingerprint/dimensions do not match the expected ones.
WeightVector load_weights(std::istream& is, std::size_t num_batteries, std::size_t num_bg_states,
                          const std::string& expected_fingerprint);

}  // namespace bbank
