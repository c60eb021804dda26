#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bbank/core.hpp"
#include "bbank/learner.hpp"

namespace bbank {

/// Everything one JSON config file carries.
struct ExperimentConfig {
    BankConfig bank;
    BackgroundChain chain;
    LearnSchedule schedule;
    int initial_state = 0;
};

/// Malformed JSON, wrong field types, or missing required fields. Value
/// range checks are left to validate_config.
class ConfigParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config(std::istream& is);
/// Throws std::ios_base::failure when the file cannot be opened.
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Full report: bank/chain invariants, schedule ranges, and the initial
/// background state index.
ValidationReport validate_experiment(const ExperimentConfig& cfg);

/// 16 hex digits of FNV-1a 64 over the canonical JSON of the MDP primitives
/// (batteries, gamma, chain). Start state and schedule do not participate, so
/// weights stay reusable across runs that only change those.
std::string config_fingerprint(const BankConfig& bank, const BackgroundChain& chain);

/// The two-battery, four-state instance used throughout the case study:
/// S_e = {-4, -1, 1, 5} with f(x) = x, penalty weights (0.1, 1), lossless,
/// ramps 25 (never binding for the sizes studied).
ExperimentConfig case_study_config();

}  // namespace bbank
