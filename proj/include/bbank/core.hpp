#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bbank {

/// One storage unit. Energies are integer multiples of a common unit.
struct BatteryConfig {
    int capacity = 1;             // B
    int ramp = 1;                 // max units moved in or out per step
    double dissipation = 1.0;     // retention factor applied to stored energy each step
    double penalty_weight = 0.0;  // magnitude of the cycling-penalty prefactor
    double lower_frac = 0.2;
    double upper_frac = 0.8;
};

struct BankConfig {
    std::vector<BatteryConfig> batteries;
    double gamma = 0.95;
    /// Empty means "half": floor(capacity / 2) per battery.
    std::optional<std::vector<int>> initial_occupancy;

    std::size_t size() const { return batteries.size(); }
    std::vector<int> start_occupancy() const;
    std::vector<int> capacities() const;
};

/// Finite DTMC driving net generation. net_gen[x] is the energy surplus
/// (positive) or deficit (negative) while the chain sits in state x.
struct BackgroundChain {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> transition;
    std::vector<int> net_gen;

    std::size_t size() const { return labels.size(); }
};

struct State {
    int x = 0;
    std::vector<int> b;

    friend bool operator==(const State&, const State&) = default;
};

/// Per-battery injection (positive) or extraction (negative), in energy units.
struct Action {
    std::vector<int> units;

    Action() = default;
    explicit Action(std::vector<int> u) : units(std::move(u)) {}

    std::size_t size() const { return units.size(); }
    int operator[](std::size_t i) const { return units[i]; }
    int sum() const;

    friend bool operator==(const Action&, const Action&) = default;
    friend auto operator<=>(const Action&, const Action&) = default;
};

struct Violation {
    std::string path;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_config(const BankConfig& bank, const BackgroundChain& chain);

/// True when every state can reach every other through positive-probability edges.
bool is_irreducible(const std::vector<std::vector<double>>& transition);

/// Projection of y onto [lo, hi]. Requires lo <= hi.
int clip(int y, int lo, int hi);

/// Formats an integer vector as "(a,b,c)".
std::string format_tuple(const std::vector<int>& v);

}  // namespace bbank
