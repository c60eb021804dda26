#pragma once

#include <vector>

#include "bbank/config_io.hpp"
#include "bbank/core.hpp"

namespace bbank::testing {

inline BackgroundChain case_study_chain() { return case_study_config().chain; }

/// Bank with the case-study penalty weights (0.1, 1) and the given capacities and ramps.
inline BankConfig two_battery_bank(int b1, int b2, int c1 = 25, int c2 = 25, double eta1 = 1.0, double eta2 = 1.0) {
    BankConfig bank;
    bank.batteries = {{b1, c1, eta1, 0.1, 0.2, 0.8}, {b2, c2, eta2, 1.0, 0.2, 0.8}};
    return bank;
}

/// Single-state chain whose net generation is fixed at f.
inline BackgroundChain constant_chain(int f) {
    BackgroundChain chain;
    chain.labels = {"f"};
    chain.transition = {{1.0}};
    chain.net_gen = {f};
    return chain;
}

}  // namespace bbank::testing
