#include "bbank/features.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "bbank/env.hpp"

namespace bbank {

std::size_t feature_dimension(std::size_t num_batteries, std::size_t num_bg_states) {
    return (2 * num_batteries + 1) * num_bg_states + 1;
}

std::size_t feature_dimension(const BankConfig& bank, const BackgroundChain& chain) {
    return feature_dimension(bank.size(), chain.size());
}

FeatureVector::FeatureVector(std::size_t dimension, double reward, std::size_t block, std::vector<double> block_values)
    : dimension_(dimension), reward_(reward), block_(block), block_values_(std::move(block_values)) {
    if (block_offset() + block_values_.size() > dimension_)
        throw std::invalid_argument("FeatureVector: block exceeds dimension");
}

double FeatureVector::operator[](std::size_t i) const {
    if (i >= dimension_) throw std::out_of_range("FeatureVector index");
    if (i == 0) return reward_;
    const std::size_t off = block_offset();
    if (i >= off && i < off + block_values_.size()) return block_values_[i - off];
    return 0.0;
}

std::vector<double> FeatureVector::dense() const {
    std::vector<double> out(dimension_, 0.0);
    out[0] = reward_;
    const std::size_t off = block_offset();
    for (std::size_t j = 0; j < block_values_.size(); ++j) out[off + j] = block_values_[j];
    return out;
}

bool WeightVector::all_finite() const {
    for (double v : w)
        if (!std::isfinite(v)) return false;
    return true;
}

std::vector<double> normalized_occupancy(const BankConfig& bank, const std::vector<int>& b, const Action& a) {
    std::vector<double> y(bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i)
        y[i] = static_cast<double>(b[i] + a[i]) / static_cast<double>(bank.batteries[i].capacity);
    return y;
}

std::pair<double, double> kernel_pair(double y) {
    const double e = 1.0 - y;
    return {-(e * e) * (e * e), -(y * y) * (y * y)};
}

FeatureVector feature_vector(const BankConfig& bank, const BackgroundChain& chain, const State& s, const Action& a) {
    const std::size_t n = bank.size();
    std::vector<double> block;
    block.reserve(2 * n + 1);
    block.push_back(1.0);
    for (double y : normalized_occupancy(bank, s.b, a)) {
        auto [empty_side, full_side] = kernel_pair(y);
        block.push_back(empty_side);
        block.push_back(full_side);
    }
    return FeatureVector(feature_dimension(bank, chain), reward(bank, s.b, a), static_cast<std::size_t>(s.x),
                         std::move(block));
}

double q_hat(const FeatureVector& phi, const WeightVector& w) {
    if (phi.dimension() != w.dimension())
        throw std::invalid_argument("q_hat: feature dimension " + std::to_string(phi.dimension()) +
                                    " != weight dimension " + std::to_string(w.dimension()));
    double q = phi.reward() * w.w[0];
    const std::size_t off = phi.block_offset();
    const auto& vals = phi.block_values();
    for (std::size_t j = 0; j < vals.size(); ++j) q += vals[j] * w.w[off + j];
    return q;
}

void save_weights(std::ostream& os, const WeightVector& w, std::size_t num_batteries, std::size_t num_bg_states,
                  const std::string& fingerprint) {
    nlohmann::json j;
    j["version"] = kWeightFileVersion;
    j["fingerprint"] = fingerprint;
    j["d"] = w.dimension();
    j["N"] = num_batteries;
    j["num_bg_states"] = num_bg_states;
    j["weights"] = w.w;
    os << j.dump(2) << '\n';
}

WeightVector load_weights(std::istream& is, std::size_t num_batteries, std::size_t num_bg_states,
                          const std::string& expected_fingerprint) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("weights: parse error: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != kWeightFileVersion)
            throw std::runtime_error("weights: unsupported version " + j.at("version").dump());
        const auto fp = j.at("fingerprint").get<std::string>();
        if (fp != expected_fingerprint)
            throw std::runtime_error("weights: config fingerprint mismatch (file " + fp + ", config " +
                                     expected_fingerprint + ")");
        const auto d = j.at("d").get<std::size_t>();
        if (j.at("N").get<std::size_t>() != num_batteries || j.at("num_bg_states").get<std::size_t>() != num_bg_states ||
            d != feature_dimension(num_batteries, num_bg_states))
            throw std::runtime_error("weights: dimensions do not match the config");
        WeightVector w(j.at("weights").get<std::vector<double>>());
        if (w.dimension() != d) throw std::runtime_error("weights: array length != d");
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("weights: ") + e.what());
    }
}

}  // namespace bbank
