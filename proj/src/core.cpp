#include "bbank/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bbank {

std::vector<int> BankConfig::start_occupancy() const {
    if (initial_occupancy) return *initial_occupancy;
    std::vector<int> b;
    b.reserve(batteries.size());
    for (const auto& bat : batteries) b.push_back(bat.capacity / 2);
    return b;
}

std::vector<int> BankConfig::capacities() const {
    std::vector<int> caps;
    caps.reserve(batteries.size());
    for (const auto& bat : batteries) caps.push_back(bat.capacity);
    return caps;
}

int Action::sum() const { return std::accumulate(units.begin(), units.end(), 0); }

std::string ValidationReport::to_string() const {
    if (ok()) return "pass\n";
    std::ostringstream os;
    os << "fail (" << violations.size() << " violation" << (violations.size() == 1 ? "" : "s") << ")\n";
    for (const auto& v : violations) os << "  " << v.path << ": " << v.message << '\n';
    return os.str();
}

bool is_irreducible(const std::vector<std::vector<double>>& transition) {
    const std::size_t n = transition.size();
    if (n == 0) return false;
    // Every state reachable from 0 and 0 reachable from every state.
    auto reach_all = [&](bool reversed) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                double p = reversed ? transition[v][u] : transition[u][v];
                if (p > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    return reach_all(false) && reach_all(true);
}

ValidationReport validate_config(const BankConfig& bank, const BackgroundChain& chain) {
    ValidationReport report;
    auto fail = [&](std::string path, std::string msg) {
        report.violations.push_back({std::move(path), std::move(msg)});
    };

    if (bank.batteries.empty()) fail("batteries", "at least one battery required");
    for (std::size_t i = 0; i < bank.batteries.size(); ++i) {
        const auto& bat = bank.batteries[i];
        const std::string p = "batteries[" + std::to_string(i) + "]";
        if (bat.capacity < 1) fail(p + ".capacity", "capacity >= 1");
        if (bat.ramp < 1) fail(p + ".ramp", "ramp >= 1");
        if (!(bat.dissipation > 0.0 && bat.dissipation <= 1.0)) fail(p + ".dissipation", "0 < dissipation <= 1");
        if (!(bat.penalty_weight >= 0.0) || !std::isfinite(bat.penalty_weight))
            fail(p + ".penalty_weight", "penalty_weight >= 0");
        if (!(bat.lower_frac >= 0.0 && bat.lower_frac < 1.0)) fail(p + ".lower_frac", "0 <= lower_frac < 1");
        if (!(bat.upper_frac > 0.0 && bat.upper_frac <= 1.0)) fail(p + ".upper_frac", "0 < upper_frac <= 1");
        if (!(bat.lower_frac < bat.upper_frac)) fail(p, "lower_frac < upper_frac");
    }

    if (!(bank.gamma > 0.0 && bank.gamma < 1.0)) fail("gamma", "0 < gamma < 1");

    if (bank.initial_occupancy) {
        const auto& b0 = *bank.initial_occupancy;
        if (b0.size() != bank.batteries.size()) {
            fail("initial_occupancy", "length must equal number of batteries");
        } else {
            for (std::size_t i = 0; i < b0.size(); ++i)
                if (b0[i] < 0 || b0[i] > bank.batteries[i].capacity)
                    fail("initial_occupancy[" + std::to_string(i) + "]", "0 <= occupancy <= capacity");
        }
    }

    const std::size_t n = chain.labels.size();
    if (n == 0) fail("chain.labels", "at least one background state required");
    if (chain.net_gen.size() != n) fail("chain.net_gen", "length must equal number of labels");
    bool square = chain.transition.size() == n;
    if (!square) fail("chain.transition", "must have one row per label");
    for (std::size_t r = 0; r < chain.transition.size(); ++r) {
        const auto& row = chain.transition[r];
        const std::string p = "chain.transition[" + std::to_string(r) + "]";
        if (row.size() != n) {
            fail(p, "row length must equal number of labels");
            square = false;
            continue;
        }
        double sum = 0.0;
        bool negative = false;
        for (double v : row) {
            if (!(v >= 0.0) || !std::isfinite(v)) negative = true;
            sum += v;
        }
        if (negative) fail(p, "entries must be finite and >= 0");
        if (std::abs(sum - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "row must sum to 1 (sums to " << sum << ")";
            fail(p, os.str());
        }
    }
    if (square && n > 0 && !is_irreducible(chain.transition)) fail("chain.transition", "chain must be irreducible");

    return report;
}

int clip(int y, int lo, int hi) {
    if (lo > hi) throw std::logic_error("clip: empty interval");
    return std::min(std::max(y, lo), hi);
}

std::string format_tuple(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s + ")";
}

}  // namespace bbank
