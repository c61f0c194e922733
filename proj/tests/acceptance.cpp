// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes. Usage: acceptance <path to qsba cli>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "qsba/attacks.hpp"
#include "qsba/harness.hpp"
#include "qsba/stats.hpp"

using namespace qsba;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
        }
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

bool within_ci(const Metric& m, double value, double z) { return oracle::wilson_contains(m.successes, m.trials, z, value); }

AttackConfig sized(std::uint64_t trials, std::uint64_t seed) {
    AttackConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

// 10^6 qubits: 125000 bids of 8 bits.
Outcome criterion1() {
    Outcome o;
    const Metric m = attack_semi_honest_projective(sized(125000, 1001)).metric("per_bit_success");
    const double exact = (1.0 + std::sin(oracle::pi / 4.0)) / 2.0;
    o.require(m.trials == 1000000, "qubits=" + std::to_string(m.trials));
    o.require(std::abs(m.estimate - exact) <= 0.0015, "estimate " + fmt(m.estimate) + " vs " + fmt(exact) + " (tol 0.0015)");
    return o;
}

Outcome criterion2() {
    Outcome o;
    const AttackReport r = attack_semi_honest_usd(sized(125000, 1002));
    const Metric& in = r.metric("inconclusive_rate");
    const double exact = std::cos(oracle::pi / 4.0);
    o.require(in.trials == 1000000, "qubits=" + std::to_string(in.trials));
    o.require(std::abs(in.estimate - exact) <= 0.002, "inconclusive " + fmt(in.estimate) + " vs " + fmt(exact) + " (tol 0.002)");
    o.require(r.metric("conclusive_wrong_count").estimate == 0.0,
              "conclusive wrong " + fmt(r.metric("conclusive_wrong_count").estimate));
    return o;
}

Outcome criterion3() {
    Outcome o;
    AttackConfig cfg = sized(12500, 1003);
    cfg.l = 10;
    const Metric m = attack_multicopy_majority(cfg).metric("per_bit_success");
    const double exact = 1.0 - static_cast<double>(oracle::binom_cdf(10, 5, (1.0 + std::sin(oracle::pi / 4.0)) / 2.0));
    const double z99 = 2.5758293035489004;
    const auto [lo, hi] = oracle::wilson(m.successes, m.trials, z99);
    o.require(m.trials == 100000, "bits=" + std::to_string(m.trials));
    o.require(m.estimate > 0.99, "estimate " + fmt(m.estimate) + " > 0.99");
    o.require(lo <= exact && exact <= hi, "exact " + fmt(exact) + " in Wilson 99% [" + fmt(lo) + ", " + fmt(hi) + "]");
    return o;
}

Outcome criterion4() {
    Outcome o;
    const double closed = closed_forms().all_inconclusive(10);
    const double oracle_value = std::pow(std::cos(oracle::pi / 4.0), 10);
    o.require(std::abs(closed - 0.03125) <= 1e-15 && std::abs(oracle_value - 0.03125) <= 1e-15,
              "closed form " + fmt(closed) + " = 1/32");
    AttackConfig cfg = sized(12500, 1004);
    cfg.l = 10;
    const Metric m = attack_multicopy_usd(cfg).metric("inconclusive_rate");
    o.require(within_ci(m, 0.03125, 4.0), "simulated " + fmt(m.estimate) + " within 4 sigma of 1/32");
    o.require(m.estimate < 0.05, "simulated " + fmt(m.estimate) + " < 0.05");
    return o;
}

Outcome criterion5() {
    Outcome o;
    const double p = (1.0 + std::sin(oracle::pi / 4.0)) / 2.0;
    int held = 0;
    for (int l = 2; l <= 64; ++l) {
        const BoundReport b = success_bounds(BinomialModel{l, p});
        const auto [lo, hi] = oracle::majority_bounds(l, p);
        const double exact = oracle::majority_success(l, p);
        const bool ok = b.sandwich_holds() && lo <= exact && exact <= hi && std::abs(b.lower_bound - lo) < 1e-12 &&
                        std::abs(b.upper_bound - hi) < 1e-12 && std::abs(b.exact_success - exact) < 1e-12;
        held += ok ? 1 : 0;
    }
    o.require(held == 63, "sandwich holds for " + std::to_string(held) + "/63 values of l");
    const BoundReport b = success_bounds(BinomialModel{10, p});
    const auto [lo, hi] = oracle::majority_bounds(10, p);
    const double exact = oracle::majority_success(10, p);
    o.require(std::abs(b.lower_bound - lo) < 1e-3 && std::abs(b.exact_success - exact) < 1e-3 &&
                  std::abs(b.upper_bound - hi) < 1e-3,
              "l=10 triple (" + fmt(b.lower_bound) + ", " + fmt(b.exact_success) + ", " + fmt(b.upper_bound) +
                  ") vs recomputed");
    o.require(std::abs(b.lower_bound - 0.9687) < 1e-3 && std::abs(b.exact_success - 0.9911) < 1e-3 &&
                  std::abs(b.upper_bound - 0.9930) < 1e-3,
              "l=10 triple vs (0.9687, 0.9911, 0.9930)");
    return o;
}

Outcome criterion6() {
    Outcome o;
    // Outcome order 0, 1, +, -.
    const std::array<std::pair<const char*, std::array<double, 4>>, 4> table{{
        {"0", {0.5, 0.0, 0.25, 0.25}},
        {"1", {0.0, 0.5, 0.25, 0.25}},
        {"+", {0.25, 0.25, 0.5, 0.0}},
        {"-", {0.25, 0.25, 0.0, 0.5}},
    }};
    const std::array<const char*, 4> outcomes{"0", "1", "+", "-"};
    int covered = 0;
    for (int block = 0; block < 4; ++block) {
        AttackConfig cfg = sized(500000, 1060 + static_cast<std::uint64_t>(block));
        cfg.l = 2;
        cfg.m = 2;
        cfg.fixed_state = block;
        const AttackReport r = attack_zhang2_basis_split(cfg);
        for (const auto& [state, probs] : table) {
            const std::string prefix = std::string("dist[") + state + "][";
            if (!r.has(prefix + "0]")) {
                continue;
            }
            ++covered;
            double linf = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                const Metric& m = r.metric(prefix + outcomes[k] + "]");
                linf = std::max(linf, std::abs(m.estimate - probs[k]));
            }
            const std::uint64_t samples = r.metric(prefix + "0]").trials;
            o.require(linf < 0.005 && samples == 1000000,
                      std::string("|") + state + "> Linf " + fmt(linf) + " over " + std::to_string(samples) + " samples");
        }
    }
    o.require(covered == 4, "all four true states covered");
    return o;
}

Outcome criterion7() {
    Outcome o;
    AttackConfig cfg = sized(10000, 1007);
    const AttackReport both = attack_cnot(CnotMode::both_ways, cfg);
    o.require(both.metric("detection_rate").successes == 0,
              "both_ways detections " + std::to_string(both.metric("detection_rate").successes));
    const double purity = both.metric("min_ancilla_purity").estimate;
    o.require(std::abs(purity - 1.0) <= 1e-12, "min purity " + fmt(purity));
    const double mi = both.metric("mutual_information_bits").estimate;
    o.require(mi < 1e-3, "mutual information " + fmt(mi) + " bits");

    cfg.seed = 1070;
    const AttackReport ret = attack_cnot(CnotMode::return_only, cfg);
    const double diag = ret.metric("diagonal_detection").estimate;
    const double avg = ret.metric("detection_rate").estimate;
    o.require(std::abs(diag - 0.5) <= 0.01, "return_only diagonal " + fmt(diag));
    o.require(std::abs(avg - 0.25) <= 0.01, "return_only average " + fmt(avg));
    return o;
}

struct Campaigns {
    SqsbaCampaign honest;
    std::vector<std::pair<std::string, SqsbaCampaign>> attacked;
};

Campaigns run_campaigns() {
    SessionConfig sc;
    sc.num_parties = 4;
    sc.bid_length = 8;
    sc.delta = 0.25;
    Campaigns c;
    c.honest = run_sqsba_campaign(sc, "none", 1000, 1008);
    std::uint64_t seed = 1080;
    for (const char* name : {"false_order", "enc_flip", "swap"}) {
        c.attacked.emplace_back(name, run_sqsba_campaign(sc, name, 1000, ++seed));
    }
    return c;
}

Outcome criterion8(const Campaigns& c) {
    Outcome o;
    o.require(c.honest.fair == 1000 && c.honest.correct_winner == 1000,
              "honest fair " + std::to_string(c.honest.fair) + "/1000, correct winner " +
                  std::to_string(c.honest.correct_winner) + "/1000");
    for (const auto& [name, k] : c.attacked) {
        o.require(k.altered >= 1 && k.altered_unfair == k.altered,
                  name + " unfair in " + std::to_string(k.altered_unfair) + "/" + std::to_string(k.altered) +
                      " altered sessions (of " + std::to_string(k.sessions) + ")");
    }
    return o;
}

Outcome criterion9(const Campaigns& c) {
    Outcome o;
    std::uint64_t semi = c.honest.semi_quantum;
    std::uint64_t total = c.honest.sessions;
    for (const auto& [name, k] : c.attacked) {
        semi += k.semi_quantum;
        total += k.sessions;
    }
    o.require(semi == total, "classical-only audits in " + std::to_string(semi) + "/" + std::to_string(total) + " sessions");
    return o;
}

int run_command(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10(const std::string& cli) {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "qsba_acceptance";
    fs::create_directories(dir);
    const fs::path a = dir / "reproduce_a.csv";
    const fs::path b = dir / "reproduce_b.csv";
    const int rc_a = run_command("\"" + cli + "\" reproduce --seed 42 --out \"" + a.string() + "\" 2>/dev/null");
    const int rc_b = run_command("\"" + cli + "\" reproduce --seed 42 --out \"" + b.string() + "\" 2>/dev/null");
    const std::string text_a = slurp(a);
    o.require(rc_a == 0 && rc_b == 0, "exit codes " + std::to_string(rc_a) + ", " + std::to_string(rc_b));
    o.require(!text_a.empty() && text_a == slurp(b), "reports byte-identical (" + std::to_string(text_a.size()) + " bytes)");
    return o;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <qsba cli>\n";
        return 2;
    }
    int failed = 0;
    auto report = [&](int id, const std::string& title, const Outcome& o) {
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << title << "): " << o.detail << '\n'
                  << std::flush;
        failed += o.pass ? 0 : 1;
    };
    report(1, "tau-basis per-bit success", criterion1());
    report(2, "USD inconclusive rate", criterion2());
    report(3, "l=10 majority attack", criterion3());
    report(4, "l=10 USD attack", criterion4());
    report(5, "bound sandwich", criterion5());
    report(6, "basis-split distributions", criterion6());
    report(7, "CNOT attack", criterion7());
    const Campaigns campaigns = run_campaigns();
    report(8, "end-to-end verdicts", criterion8(campaigns));
    report(9, "semi-quantum audit", criterion9(campaigns));
    report(10, "determinism", criterion10(argv[1]));
    std::cout << (10 - failed) << "/10 criteria pass\n";
    return failed == 0 ? 0 : 1;
}
