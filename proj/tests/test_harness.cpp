#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsba/harness.hpp"
#include "qsba/parallel.hpp"

using namespace qsba;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qsba_harness_test";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream(path) << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(std::vector<std::string> args) {
    std::vector<const char*> argv{"qsba"};
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct Count {
    std::uint64_t n = 0;
    std::uint64_t sum = 0;
    Count& operator+=(const Count& o) {
        n += o.n;
        sum += o.sum;
        return *this;
    }
};

} // namespace

TEST_CASE("trial fan-out does not depend on the worker count") {
    auto run = [](const char* workers) {
        setenv("QSBA_WORKERS", workers, 1);
        return run_trials<Count>(1001, 42, [](std::uint64_t i, Rng& rng, Count& c) {
            ++c.n;
            c.sum += (rng() >> 40) ^ i;
        });
    };
    const Count one = run("1");
    const Count four = run("4");
    unsetenv("QSBA_WORKERS");
    CHECK(one.n == 1001);
    CHECK(one.sum == four.sum);
}

TEST_CASE("trial exceptions reach the caller") {
    CHECK_THROWS_AS(run_trials<Count>(10, 1,
                                      [](std::uint64_t i, Rng&, Count&) {
                                          if (i == 7) {
                                              throw std::runtime_error("boom");
                                          }
                                      }),
                    std::runtime_error);
}

TEST_CASE("report rows compute their own pass flag") {
    const ReportRow inside = ReportRow::within("a", 0.1005, 0.1, 0.001);
    CHECK(inside.pass);
    CHECK(inside.rule == PassRule::tolerance);
    CHECK_FALSE(ReportRow::within("b", 0.102, 0.1, 0.001).pass);
    CHECK(ReportRow::in_range("c", 3.0, 1.0, 10.0, std::nan("")).pass);
    CHECK_FALSE(ReportRow::in_range("d", 0.0, 1.0, 10.0, 0.0).pass);

    const Metric m = Metric::proportion("p", 40, 100, 0.5, 4.0);
    const ReportRow r = ReportRow::from_metric(m, "x.");
    CHECK(r.metric == "x.p");
    CHECK(r.rule == PassRule::ci);
    CHECK(r.pass == m.consistent());
}

TEST_CASE("csv and json renderings") {
    Report rep;
    rep.kind = "attack";
    rep.target = "demo";
    rep.seed = 3;
    rep.rows.push_back(ReportRow::within("x", 0.25, 0.25, 0.01));
    rep.rows.push_back(ReportRow::in_range("y", 5.0, 1.0, 9.0, std::numeric_limits<double>::quiet_NaN()));
    const std::string csv = to_csv(rep);
    CHECK(csv.rfind("metric,estimate,ci_low,ci_high,exact,tolerance,rule,pass\n", 0) == 0);
    CHECK(csv.find("x,0.25,0.24,0.26,0.25,0.01,tol,true\n") != std::string::npos);
    CHECK(csv.find("y,5,1,9,,,range,true\n") != std::string::npos);

    const auto j = nlohmann::json::parse(to_json(rep));
    CHECK(j["pass"] == true);
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][1]["exact"].is_null());
    CHECK(j["rows"][0]["rule"] == "tol");
}

TEST_CASE("config files are read, validated and overridden by flags") {
    const fs::path cfg = scratch("attack.json");
    write_file(cfg, R"({"kind": "attack", "target": "projective", "trials": 500, "seed": 9, "format": "json"})");
    const ExperimentConfig loaded = load_experiment_config(cfg.string());
    CHECK(loaded.kind == "attack");
    CHECK(loaded.params.trials == 500);
    CHECK(loaded.format == ReportFormat::json);

    const fs::path out = scratch("attack_out.json");
    REQUIRE(cli({"--config", cfg.string(), "--trials", "700", "--out", out.string()}) == 0);
    const auto j = nlohmann::json::parse(read_file(out));
    CHECK(j["seed"] == 9);
    CHECK(j["rows"][0]["metric"] == "per_bit_success");
    // 700 trials of 8 bits each.
    const double hits = j["rows"][0]["estimate"].get<double>() * 5600.0;
    CHECK(hits == doctest::Approx(std::round(hits)).epsilon(1e-9));

    write_file(cfg, R"({"kind": "attack", "target": "projective", "trails": 5})");
    CHECK_THROWS_AS(load_experiment_config(cfg.string()), std::invalid_argument);
    write_file(cfg, R"({"kind": "attack", "trials": "many"})");
    CHECK_THROWS_AS(load_experiment_config(cfg.string()), std::invalid_argument);
    write_file(cfg, "not json");
    CHECK_THROWS_AS(load_experiment_config(cfg.string()), std::invalid_argument);
    CHECK(cli({"--config", cfg.string()}) == 2);
}

TEST_CASE("exit codes") {
    const fs::path out = scratch("exit.csv");
    CHECK(cli({"--help"}) == 0);
    CHECK(cli({"attack", "projective", "--trials", "300", "--out", out.string()}) == 0);
    // A vanishing interval width makes the estimate miss the exact value.
    CHECK(cli({"attack", "projective", "--trials", "300", "--z", "1e-9", "--out", out.string()}) == 1);
    CHECK(cli({"attack", "no_such_attack"}) == 2);
    CHECK(cli({"protocol", "liu", "--adversary", "swap"}) == 2);
    CHECK(cli({"attack", "projective", "--trials", "0"}) == 2);
    CHECK(cli({"--format", "xml", "bounds"}) == 2);
    CHECK(cli({}) == 2);
}

TEST_CASE("commands are deterministic for a fixed seed") {
    ExperimentConfig cfg;
    cfg.kind = "attack";
    cfg.target = "cnot";
    cfg.params.trials = 300;
    cfg.params.seed = 42;
    cfg.params.cnot_mode = CnotMode::return_only;
    const std::string a = to_csv(run_experiment(cfg));
    CHECK(a == to_csv(run_experiment(cfg)));
    cfg.params.seed = 43;
    CHECK(a != to_csv(run_experiment(cfg)));
}

TEST_CASE("bounds command covers l = 2..64 by default") {
    ExperimentConfig cfg;
    cfg.kind = "bounds";
    const Report all = cmd_bounds(cfg);
    CHECK(all.rows.size() == 63);
    CHECK(all.passed());
    cfg.params.l = 10;
    const Report ten = cmd_bounds(cfg);
    REQUIRE(ten.rows.size() == 1);
    CHECK(ten.rows[0].ci_low == doctest::Approx(0.96875));
}

TEST_CASE("protocol command runs honest and adversarial campaigns") {
    ExperimentConfig cfg;
    cfg.kind = "protocol";
    cfg.target = "zhang2";
    cfg.params.trials = 20;
    cfg.params.seed = 5;
    CHECK(cmd_protocol(cfg).passed());

    cfg.target = "sqsba";
    cfg.adversary = "enc_flip";
    cfg.transcript_path = scratch("first.jsonl").string();
    const Report r = cmd_protocol(cfg);
    CHECK(r.passed());
    CHECK(r.rows.front().metric == "altered_sessions");
    std::ifstream lines(cfg.transcript_path);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        CHECK(nlohmann::json::parse(line).contains("actor"));
        ++count;
    }
    CHECK(count > 10);
}

TEST_CASE("campaign counters add up") {
    SessionConfig sc;
    const SqsbaCampaign c = run_sqsba_campaign(sc, "false_order", 40, 11);
    CHECK(c.sessions == 40);
    CHECK(c.fair + c.unfair + c.aborted == c.sessions);
    CHECK(c.altered_unfair == c.altered);
    CHECK(c.semi_quantum == c.sessions);
    CHECK_THROWS_AS(run_sqsba_campaign(sc, "nobody", 1, 1), std::invalid_argument);
}
