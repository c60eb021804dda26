#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bbank/config_io.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;
using namespace bbank;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("bbank_cli_" + std::to_string(std::rand()) + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    std::string write(const std::string& name, const nlohmann::json& j) const {
        std::ofstream(path / name) << j.dump(2);
        return file(name);
    }
};

const std::string kCaseStudy = std::string(BBANK_CONFIG_DIR) + "/case_study.json";

}  // namespace

TEST_CASE("validate: shipped config passes") {
    const auto r = run({"validate", kCaseStudy});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.rfind("pass", 0) == 0);
}

TEST_CASE("validate: parse and validation failures use distinct codes") {
    TempDir dir;
    auto j = to_json(case_study_config());
    j["batteries"][0]["capacity"] = "ten";
    CHECK(run({"validate", dir.write("bad_type.json", j)}).code == cli::kIo);

    j = to_json(case_study_config());
    j["initial_occupancy"] = {11, 5};
    const auto r = run({"validate", dir.write("bad_occ.json", j)});
    CHECK(r.code == cli::kValidation);
    CHECK(r.out.find("initial_occupancy[0]") != std::string::npos);

    CHECK(run({"validate", dir.file("missing.json")}).code == cli::kIo);
    CHECK(run({"validate"}).code == cli::kValidation);
    CHECK(run({}).code == cli::kValidation);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("train: zero steps writes zero weights; a fixed seed is byte-reproducible") {
    TempDir dir;
    CHECK(run({"train", kCaseStudy, "--steps", "0", "--out", dir.file("zero.json")}).code == cli::kOk);
    const auto zero = nlohmann::json::parse(slurp(dir.file("zero.json")));
    CHECK(zero.at("d") == 21);
    for (const auto& w : zero.at("weights")) CHECK(w.get<double>() == 0.0);

    for (const char* name : {"a.json", "b.json"}) {
        const auto r = run({"train", kCaseStudy, "--steps", "5000", "--seed", "7", "--out", dir.file(name), "--log",
                            dir.file(std::string(name) + ".csv")});
        CHECK(r.code == cli::kOk);
        CHECK(r.out.find("cumulative training reward") != std::string::npos);
    }
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
    CHECK(slurp(dir.file("a.json.csv")).rfind("step,epsilon,beta,mean_abs_td,cum_reward", 0) == 0);

    CHECK(run({"train", kCaseStudy, "--beta0", "1.5", "--out", dir.file("c.json")}).code == cli::kValidation);
    CHECK(run({"train", kCaseStudy, "--steps", "10", "--out", "/nonexistent/dir/w.json"}).code == cli::kIo);
}

TEST_CASE("train: divergence aborts with the runtime code") {
    TempDir dir;
    auto j = to_json(case_study_config());
    for (auto& b : j["batteries"]) b["penalty_weight"] = 1e300;
    j["schedule"]["beta0"] = 0.9;
    const auto r = run({"train", dir.write("wild.json", j), "--steps", "2000", "--out", dir.file("w.json")});
    CHECK(r.code == cli::kRuntime);
    CHECK(r.err.find("non-finite") != std::string::npos);
}

TEST_CASE("compare: reproducible table, csv, failing rows") {
    TempDir dir;
    const std::vector<std::string> args{"compare", kCaseStudy, "--sizes", "2,3", "4,4", "--seeds", "1",
                                        "--eval-steps", "2000", "--steps", "2000"};
    auto with_csv = [&](const std::string& name) {
        auto a = args;
        a.insert(a.end(), {"--csv", dir.file(name)});
        return run(a);
    };
    const auto a = with_csv("a.csv"), b = with_csv("b.csv");
    CHECK(a.code == cli::kOk);
    CHECK(a.out == b.out);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
    CHECK(a.out.find("greedy") != std::string::npos);

    const auto bad = run({"compare", kCaseStudy, "--sizes", "2,3", "0,4", "--seeds", "1", "--eval-steps", "100",
                          "--steps", "100"});
    CHECK(bad.code == cli::kRuntime);
    CHECK(bad.out.find("FAILED 0,4") != std::string::npos);

    CHECK(run({"compare", kCaseStudy, "--sizes", "2,x"}).code == cli::kValidation);
}

TEST_CASE("compare: ramp override and pre-trained weights") {
    TempDir dir;
    REQUIRE(run({"train", kCaseStudy, "--steps", "3000", "--out", dir.file("w.json")}).code == cli::kOk);
    const auto ok = run({"compare", kCaseStudy, "--seeds", "1", "--eval-steps", "1000", "--weights", dir.file("w.json")});
    CHECK(ok.code == cli::kOk);
    CHECK(ok.out.find("loaded from") != std::string::npos);
    const auto mismatch = run({"compare", kCaseStudy, "--sizes", "4,4", "--seeds", "1", "--eval-steps", "100",
                               "--weights", dir.file("w.json")});
    CHECK(mismatch.code == cli::kRuntime);
    const auto ramp = run({"compare", kCaseStudy, "--sizes", "6,6", "--ramp", "2,2", "--seeds", "1", "--eval-steps",
                           "1000", "--steps", "1000"});
    CHECK(ramp.code == cli::kOk);
}

TEST_CASE("solve-exact: premise gate, pass line and state cap") {
    TempDir dir;
    auto j = to_json(case_study_config());
    j["batteries"][0]["capacity"] = 2;
    j["batteries"][1]["capacity"] = 3;
    const auto free_cfg = dir.write("free.json", j);
    const auto r = run({"solve-exact", free_cfg, "--out", dir.file("sol.csv")});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(slurp(dir.file("sol.csv")).rfind("state_index,x,b,best_action,value", 0) == 0);

    j["batteries"][0]["ramp"] = 2;
    j["batteries"][1]["ramp"] = 2;
    const auto gated = run({"solve-exact", dir.write("ramped.json", j), "--out", dir.file("sol2.csv")});
    CHECK(gated.code == cli::kOk);
    CHECK(gated.out.find("max state-wise") != std::string::npos);
    CHECK(gated.out.find("PASS") == std::string::npos);
    CHECK(gated.out.find("FAIL") == std::string::npos);

    const auto refused = run({"solve-exact", kCaseStudy, "--max-states", "100", "--out", dir.file("sol3.csv")});
    CHECK(refused.code == cli::kRuntime);
    CHECK(refused.err.find("484") != std::string::npos);
}

TEST_CASE("trajectory export is reproducible") {
    TempDir dir;
    CHECK(run({"trajectory", kCaseStudy, "--steps", "50", "--seed", "3", "--out", dir.file("a.txt")}).code == cli::kOk);
    CHECK(run({"trajectory", kCaseStudy, "--steps", "50", "--seed", "3", "--out", dir.file("b.txt")}).code == cli::kOk);
    CHECK(slurp(dir.file("a.txt")) == slurp(dir.file("b.txt")));
    CHECK(slurp(dir.file("a.txt")).rfind("# seed=3 T=50\n", 0) == 0);
}
