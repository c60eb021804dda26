#include "bbank/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>

namespace bbank {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

BatteryConfig parse_battery(const json& j) {
    BatteryConfig b;
    b.capacity = j.at("capacity").get<int>();
    b.ramp = j.at("ramp").get<int>();
    b.dissipation = get_or(j, "dissipation", 1.0);
    b.penalty_weight = j.at("penalty_weight").get<double>();
    b.lower_frac = get_or(j, "lower_frac", 0.2);
    b.upper_frac = get_or(j, "upper_frac", 0.8);
    return b;
}

BackgroundChain parse_chain(const json& j) {
    BackgroundChain c;
    for (const auto& label : j.at("labels")) c.labels.push_back(label.is_string() ? label.get<std::string>() : label.dump());
    c.transition = j.at("transition").get<std::vector<std::vector<double>>>();
    c.net_gen = j.at("net_gen").get<std::vector<int>>();
    return c;
}

LearnSchedule parse_schedule(const json& j) {
    LearnSchedule s;
    s.steps = get_or(j, "steps", s.steps);
    s.beta0 = get_or(j, "beta0", s.beta0);
    s.beta_tau = get_or(j, "beta_tau", s.beta_tau);
    s.eps0 = get_or(j, "eps0", s.eps0);
    s.eps_min = get_or(j, "eps_min", s.eps_min);
    s.eps_decay = get_or(j, "eps_decay", s.eps_decay);
    s.seed = get_or(j, "seed", s.seed);
    return s;
}

json chain_json(const BackgroundChain& c) {
    return {{"labels", c.labels}, {"transition", c.transition}, {"net_gen", c.net_gen}};
}

json batteries_json(const BankConfig& bank) {
    json arr = json::array();
    for (const auto& b : bank.batteries)
        arr.push_back({{"capacity", b.capacity},
                       {"ramp", b.ramp},
                       {"dissipation", b.dissipation},
                       {"penalty_weight", b.penalty_weight},
                       {"lower_frac", b.lower_frac},
                       {"upper_frac", b.upper_frac}});
    return arr;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    try {
        ExperimentConfig cfg;
        for (const auto& b : j.at("batteries")) cfg.bank.batteries.push_back(parse_battery(b));
        cfg.bank.gamma = get_or(j, "gamma", 0.95);
        if (j.contains("initial_occupancy")) {
            const auto& occ = j.at("initial_occupancy");
            if (occ.is_string()) {
                if (occ.get<std::string>() != "half")
                    throw ConfigParseError("initial_occupancy: expected \"half\" or an integer array");
            } else {
                cfg.bank.initial_occupancy = occ.get<std::vector<int>>();
            }
        }
        cfg.chain = parse_chain(j.at("chain"));
        cfg.initial_state = j.at("chain").contains("initial_state") ? j.at("chain").at("initial_state").get<int>() : 0;
        if (j.contains("schedule")) cfg.schedule = parse_schedule(j.at("schedule"));
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigParseError(e.what());
    }
}

ExperimentConfig parse_config(std::istream& is) {
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigParseError(e.what());
    }
    return parse_config(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file " + path.string());
    return parse_config(in);
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["batteries"] = batteries_json(cfg.bank);
    j["gamma"] = cfg.bank.gamma;
    if (cfg.bank.initial_occupancy)
        j["initial_occupancy"] = *cfg.bank.initial_occupancy;
    else
        j["initial_occupancy"] = "half";
    j["chain"] = chain_json(cfg.chain);
    j["chain"]["initial_state"] = cfg.initial_state;
    const auto& s = cfg.schedule;
    j["schedule"] = {{"steps", s.steps},         {"beta0", s.beta0},     {"beta_tau", s.beta_tau},
                     {"eps0", s.eps0},           {"eps_min", s.eps_min}, {"eps_decay", s.eps_decay},
                     {"seed", s.seed}};
    return j;
}

ValidationReport validate_experiment(const ExperimentConfig& cfg) {
    ValidationReport report = validate_config(cfg.bank, cfg.chain);
    for (auto& v : validate_schedule(cfg.schedule).violations) report.violations.push_back(std::move(v));
    if (cfg.initial_state < 0 || static_cast<std::size_t>(cfg.initial_state) >= cfg.chain.size())
        report.violations.push_back({"chain.initial_state", "must index a background state"});
    return report;
}

std::string config_fingerprint(const BankConfig& bank, const BackgroundChain& chain) {
    // nlohmann::json objects keep keys sorted, so dump() is canonical.
    const json canonical = {{"batteries", batteries_json(bank)}, {"gamma", bank.gamma}, {"chain", chain_json(chain)}};
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig case_study_config() {
    ExperimentConfig cfg;
    cfg.bank.batteries = {BatteryConfig{10, 25, 1.0, 0.1, 0.2, 0.8}, BatteryConfig{10, 25, 1.0, 1.0, 0.2, 0.8}};
    cfg.bank.gamma = 0.95;
    cfg.chain.labels = {"-4", "-1", "1", "5"};
    cfg.chain.transition = {{0.0, 0.5, 0.3, 0.2}, {0.5, 0.0, 0.1, 0.4}, {0.3, 0.2, 0.0, 0.5}, {0.3, 0.3, 0.4, 0.0}};
    cfg.chain.net_gen = {-4, -1, 1, 5};
    return cfg;
}

}  // namespace bbank
