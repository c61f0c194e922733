#include "qsba/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "qsba/legacy.hpp"
#include "qsba/parallel.hpp"

namespace qsba {

using nlohmann::ordered_json;

namespace {

const std::set<std::string>& experiment_kinds() {
    static const std::set<std::string> kinds{"attack", "protocol", "bounds", "reproduce"};
    return kinds;
}

const std::set<std::string>& protocol_variants() {
    static const std::set<std::string> variants{"liu", "zhang1", "zhang2", "sqsba"};
    return variants;
}

const std::set<std::string>& sqsba_adversaries() {
    static const std::set<std::string> names{"none", "false_order", "enc_flip", "swap"};
    return names;
}

StateLabel parse_q_pub(const std::string& name) {
    if (name == "0") return StateLabel::Z0;
    if (name == "1") return StateLabel::Z1;
    if (name == "+") return StateLabel::XPlus;
    if (name == "-") return StateLabel::XMinus;
    const StateLabel label = parse_state_label(name);
    if (!is_bb84(label)) {
        throw std::invalid_argument("q_pub must be a BB84 state");
    }
    return label;
}

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown report format: " + name);
}

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

ordered_json json_number(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return x;
}

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(num) / static_cast<double>(den);
}

std::unique_ptr<Adversary> make_sqsba_adversary(std::string_view name) {
    if (name == "false_order") return std::make_unique<FalseEncOrderAdversary>();
    if (name == "enc_flip") return std::make_unique<EncFlipAdversary>();
    if (name == "swap") return std::make_unique<SwapAdversary>();
    return nullptr;
}

} // namespace

void ExperimentConfig::validate() const {
    if (experiment_kinds().count(kind) == 0) {
        throw std::invalid_argument("unknown experiment kind: '" + kind + "'");
    }
    if (kind == "attack") {
        const auto& names = attack_names();
        if (std::find(names.begin(), names.end(), target) == names.end() && target != "majority") {
            throw std::invalid_argument("unknown attack: '" + target + "'");
        }
    }
    if (kind == "protocol") {
        if (protocol_variants().count(target) == 0) {
            throw std::invalid_argument("unknown protocol variant: '" + target + "'");
        }
        if (sqsba_adversaries().count(adversary) == 0) {
            throw std::invalid_argument("unknown adversary: '" + adversary + "'");
        }
        if (adversary != "none" && target != "sqsba") {
            throw std::invalid_argument("adversaries are available for the sqsba protocol only");
        }
    }
    params.validate();
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot read config file " + path);
    }
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config file must hold a JSON object");
    }
    ExperimentConfig cfg;
    AttackConfig& p = cfg.params;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "kind") cfg.kind = value.get<std::string>();
            else if (key == "target") cfg.target = value.get<std::string>();
            else if (key == "adversary") cfg.adversary = value.get<std::string>();
            else if (key == "transcript") cfg.transcript_path = value.get<std::string>();
            else if (key == "out") cfg.out = value.get<std::string>();
            else if (key == "format") cfg.format = parse_format(value.get<std::string>());
            else if (key == "l") p.l = value.get<int>();
            else if (key == "m") p.m = value.get<int>();
            else if (key == "N") p.N = value.get<int>();
            else if (key == "trials") p.trials = value.get<std::uint64_t>();
            else if (key == "seed") p.seed = value.get<std::uint64_t>();
            else if (key == "z") p.z = value.get<double>();
            else if (key == "delta") p.delta = value.get<double>();
            else if (key == "threshold") p.threshold = value.get<double>();
            else if (key == "fixed_bit") p.fixed_bit = value.get<int>();
            else if (key == "fixed_state") p.fixed_state = value.get<int>();
            else if (key == "q_pub") p.q_pub = parse_q_pub(value.get<std::string>());
            else if (key == "cnot_mode") p.cnot_mode = parse_cnot_mode(value.get<std::string>());
            else if (key == "defense") p.defense = value.get<bool>();
            else if (key == "against") p.against = parse_false_permutation_target(value.get<std::string>());
            else if (key == "disturbance") p.disturbance = parse_disturbance_mode(value.get<std::string>());
            else if (key == "remedy") p.remedy = value.get<bool>();
            else if (key == "decoys") p.decoys = value.get<std::size_t>();
            else if (key == "collusion") p.collusion = parse_collusion_method(value.get<std::string>());
            else throw std::invalid_argument("unknown config key '" + key + "'");
        }
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("config value has the wrong type: ") + e.what());
    }
    return cfg;
}

std::string_view to_string(PassRule rule) {
    switch (rule) {
    case PassRule::ci: return "ci";
    case PassRule::tolerance: return "tol";
    case PassRule::range: return "range";
    }
    return "?";
}

ReportRow ReportRow::from_metric(const Metric& m, std::string_view prefix) {
    ReportRow r;
    r.metric = std::string(prefix) + m.name;
    r.estimate = m.estimate;
    r.ci_low = m.ci.low;
    r.ci_high = m.ci.high;
    r.exact = m.exact;
    r.tolerance = m.tolerance;
    r.rule = m.tolerance ? PassRule::tolerance : PassRule::ci;
    r.pass = m.consistent();
    return r;
}

ReportRow ReportRow::within(std::string metric, double estimate, double exact, double tolerance) {
    ReportRow r;
    r.metric = std::move(metric);
    r.estimate = estimate;
    r.ci_low = estimate - tolerance;
    r.ci_high = estimate + tolerance;
    r.exact = exact;
    r.tolerance = tolerance;
    r.rule = PassRule::tolerance;
    r.pass = std::abs(estimate - exact) <= tolerance;
    return r;
}

ReportRow ReportRow::in_range(std::string metric, double estimate, double low, double high, double reference) {
    ReportRow r;
    r.metric = std::move(metric);
    r.estimate = estimate;
    r.ci_low = low;
    r.ci_high = high;
    r.exact = reference;
    r.rule = PassRule::range;
    r.pass = low <= estimate && estimate <= high;
    return r;
}

bool Report::passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

std::string to_csv(const Report& report) {
    std::string s = "metric,estimate,ci_low,ci_high,exact,tolerance,rule,pass\n";
    for (const ReportRow& r : report.rows) {
        s += r.metric + ',' + format_number(r.estimate) + ',' + format_number(r.ci_low) + ',' +
             format_number(r.ci_high) + ',' + format_number(r.exact) + ',' +
             (r.tolerance ? format_number(*r.tolerance) : std::string()) + ',' + std::string(to_string(r.rule)) +
             ',' + (r.pass ? "true" : "false") + '\n';
    }
    return s;
}

std::string to_json(const Report& report) {
    ordered_json j;
    j["kind"] = report.kind;
    j["target"] = report.target;
    j["seed"] = report.seed;
    j["pass"] = report.passed();
    ordered_json rows = ordered_json::array();
    for (const ReportRow& r : report.rows) {
        rows.push_back(ordered_json{{"metric", r.metric},
                                    {"estimate", json_number(r.estimate)},
                                    {"ci_low", json_number(r.ci_low)},
                                    {"ci_high", json_number(r.ci_high)},
                                    {"exact", json_number(r.exact)},
                                    {"tolerance", r.tolerance ? json_number(*r.tolerance) : ordered_json(nullptr)},
                                    {"rule", std::string(to_string(r.rule))},
                                    {"pass", r.pass}});
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string render(const Report& report, ReportFormat format) {
    return format == ReportFormat::json ? to_json(report) : to_csv(report);
}

// ---------------------------------------------------------------------------

SqsbaCampaign& SqsbaCampaign::operator+=(const SqsbaCampaign& o) {
    sessions += o.sessions;
    fair += o.fair;
    unfair += o.unfair;
    aborted += o.aborted;
    correct_winner += o.correct_winner;
    altered += o.altered;
    altered_unfair += o.altered_unfair;
    keys_agreed += o.keys_agreed;
    semi_quantum += o.semi_quantum;
    return *this;
}

SqsbaCampaign run_sqsba_campaign(const SessionConfig& base, std::string_view adversary, std::uint64_t sessions,
                                 std::uint64_t seed) {
    if (sqsba_adversaries().count(std::string(adversary)) == 0) {
        throw std::invalid_argument("unknown adversary: '" + std::string(adversary) + "'");
    }
    SessionConfig config = base;
    if (adversary == "swap") {
        config.permutation_defense = false;
    }
    config.validate();
    return run_trials<SqsbaCampaign>(sessions, seed, [&](std::uint64_t, Rng& rng, SqsbaCampaign& tally) {
        std::vector<BidString> bids;
        for (PartyId p = 1; p <= config.bidders(); ++p) {
            bids.push_back(BidString::random(p, config.bid_length, rng));
        }
        const std::unique_ptr<Adversary> eve = make_sqsba_adversary(adversary);
        const SqsbaRun run = run_sqsba(config, bids, eve.get(), rng);
        ++tally.sessions;
        tally.fair += run.outcome.verdict == Verdict::fair ? 1 : 0;
        tally.unfair += run.outcome.verdict == Verdict::unfair ? 1 : 0;
        tally.aborted += run.outcome.aborted() ? 1 : 0;
        if (run.outcome.winner) {
            const PartyId winner = *run.outcome.winner;
            const auto expected = static_cast<PartyId>(select_winner(bids) + 1);
            tally.correct_winner += winner == expected ? 1 : 0;
            if (!(*run.outcome.winning_bid == bids[static_cast<std::size_t>(winner - 1)])) {
                ++tally.altered;
                tally.altered_unfair += run.outcome.verdict == Verdict::unfair ? 1 : 0;
            }
        }
        bool agreed = run.keys.size() == static_cast<std::size_t>(config.bidders() * (config.bidders() - 1) / 2);
        for (PartyId i = 1; agreed && i <= config.bidders(); ++i) {
            for (PartyId j = i + 1; agreed && j <= config.bidders(); ++j) {
                agreed = run.keys.has(i, j) && run.keys.pair(i, j).agreed();
            }
        }
        tally.keys_agreed += agreed ? 1 : 0;
        bool semi = true;
        for (PartyId p = 1; p <= config.bidders(); ++p) {
            semi = semi && run.audit.semi_quantum(p);
        }
        tally.semi_quantum += semi ? 1 : 0;
    });
}

// ---------------------------------------------------------------------------

namespace {

Report make_report(const ExperimentConfig& cfg) {
    Report r;
    r.kind = cfg.kind;
    r.target = cfg.target;
    r.seed = cfg.params.seed;
    return r;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot write " + path);
    }
    out << text;
}

struct LegacyTally {
    std::uint64_t sessions = 0;
    std::uint64_t fair = 0;
    std::uint64_t correct_winner = 0;

    LegacyTally& operator+=(const LegacyTally& o) {
        sessions += o.sessions;
        fair += o.fair;
        correct_winner += o.correct_winner;
        return *this;
    }
};

std::vector<BidString> random_bids(int bidders, int m, Rng& rng) {
    std::vector<BidString> bids;
    for (PartyId p = 1; p <= bidders; ++p) {
        bids.push_back(BidString::random(p, m, rng));
    }
    return bids;
}

SessionConfig session_config(const AttackConfig& p) {
    SessionConfig sc;
    sc.num_parties = p.N == 0 ? 4 : p.N;
    sc.bid_length = p.m;
    sc.delta = p.delta;
    sc.error_threshold = p.threshold;
    sc.seed = p.seed;
    sc.permutation_defense = true;
    return sc;
}

} // namespace

Report cmd_attack(const ExperimentConfig& cfg) {
    cfg.validate();
    Report report = make_report(cfg);
    const AttackReport a = run_attack(cfg.target, cfg.params);
    report.target = a.attack;
    for (const Metric& m : a.metrics) {
        report.rows.push_back(ReportRow::from_metric(m));
    }
    return report;
}

Report cmd_protocol(const ExperimentConfig& cfg) {
    cfg.validate();
    Report report = make_report(cfg);
    const AttackConfig& p = cfg.params;
    const int parties = p.N == 0 ? 4 : p.N;
    const double z = p.z;

    if (cfg.target == "sqsba") {
        const SessionConfig sc = session_config(p);
        if (!cfg.transcript_path.empty()) {
            Rng rng = Rng::for_trial(p.seed, 0);
            const std::vector<BidString> bids = random_bids(sc.bidders(), sc.bid_length, rng);
            SessionConfig first = sc;
            first.permutation_defense = cfg.adversary != "swap";
            const std::unique_ptr<Adversary> eve = make_sqsba_adversary(cfg.adversary);
            write_text(cfg.transcript_path, run_sqsba(first, bids, eve.get(), rng).transcript.to_jsonl());
        }
        const SqsbaCampaign c = run_sqsba_campaign(sc, cfg.adversary, p.trials, p.seed);
        if (cfg.adversary == "none") {
            report.rows.push_back(ReportRow::from_metric(Metric::proportion("fair_rate", c.fair, c.sessions, 1.0, z)));
            report.rows.push_back(ReportRow::from_metric(
                Metric::proportion("correct_winner_rate", c.correct_winner, c.sessions, 1.0, z)));
            report.rows.push_back(ReportRow::from_metric(
                Metric::proportion("key_agreement_rate", c.keys_agreed, c.sessions, 1.0, z)));
        } else {
            report.target += "+" + cfg.adversary;
            report.rows.push_back(ReportRow::in_range("altered_sessions", static_cast<double>(c.altered), 1.0,
                                                      static_cast<double>(c.sessions),
                                                      std::numeric_limits<double>::quiet_NaN()));
            report.rows.push_back(ReportRow::within("unfair_given_altered", ratio(c.altered_unfair, c.altered), 1.0, 0.0));
        }
        report.rows.push_back(
            ReportRow::from_metric(Metric::proportion("semi_quantum_rate", c.semi_quantum, c.sessions, 1.0, z)));
        return report;
    }

    const LegacyVariant variant = parse_legacy_variant(cfg.target);
    LegacyConfig lc;
    lc.error_threshold = p.threshold;
    lc.remedy_mode = p.remedy;
    if (!cfg.transcript_path.empty()) {
        Rng rng = Rng::for_trial(p.seed, 0);
        const std::vector<BidString> bids = random_bids(parties - 1, p.m, rng);
        write_text(cfg.transcript_path, run_legacy(variant, bids, lc, nullptr, rng).transcript.to_jsonl());
    }
    const LegacyTally t = run_trials<LegacyTally>(p.trials, p.seed, [&](std::uint64_t, Rng& rng, LegacyTally& tally) {
        const std::vector<BidString> bids = random_bids(parties - 1, p.m, rng);
        const LegacyRun run = run_legacy(variant, bids, lc, nullptr, rng);
        ++tally.sessions;
        tally.fair += run.outcome.verdict == Verdict::fair ? 1 : 0;
        const bool correct = run.outcome.winner && *run.outcome.winner == static_cast<PartyId>(select_winner(bids) + 1);
        tally.correct_winner += correct ? 1 : 0;
    });
    report.rows.push_back(ReportRow::from_metric(Metric::proportion("fair_rate", t.fair, t.sessions, 1.0, z)));
    report.rows.push_back(
        ReportRow::from_metric(Metric::proportion("correct_winner_rate", t.correct_winner, t.sessions, 1.0, z)));
    return report;
}

Report cmd_bounds(const ExperimentConfig& cfg) {
    Report report = make_report(cfg);
    report.target = "majority";
    const int l = cfg.params.l;
    if (l < 1) {
        throw std::invalid_argument("l must be positive");
    }
    const int first = l == 1 ? 2 : l;
    const int last = l == 1 ? 64 : l;
    const double p = closed_forms().p_success;
    for (int k = first; k <= last; ++k) {
        const BoundReport b = success_bounds(BinomialModel{k, p});
        report.rows.push_back(ReportRow::in_range("sandwich[l=" + std::to_string(k) + "]", b.exact_success,
                                                  b.lower_bound, b.upper_bound, b.exact_success));
    }
    return report;
}

Report cmd_reproduce(const ExperimentConfig& cfg) {
    Report report = make_report(cfg);
    report.kind = "reproduce";
    report.target = "acceptance";
    const std::uint64_t seed = cfg.params.seed;
    auto sub_seed = [&](std::uint64_t criterion) { return derive_stream_seed(seed, criterion); };
    auto& rows = report.rows;
    const ClosedForms& cf = closed_forms();

    {
        AttackConfig a;
        a.m = 8;
        a.trials = 125000;
        a.seed = sub_seed(1);
        const AttackReport r = attack_semi_honest_projective(a);
        rows.push_back(ReportRow::within("c1.tau_per_bit_success", r.metric("per_bit_success").estimate,
                                         cf.p_success, 0.0015));
    }
    {
        AttackConfig a;
        a.m = 8;
        a.trials = 125000;
        a.seed = sub_seed(2);
        const AttackReport r = attack_semi_honest_usd(a);
        rows.push_back(ReportRow::within("c2.usd_inconclusive_rate", r.metric("inconclusive_rate").estimate,
                                         cf.p_inconclusive, 0.002));
        rows.push_back(ReportRow::within("c2.usd_conclusive_wrong", r.metric("conclusive_wrong_count").estimate, 0.0,
                                         0.0));
    }
    {
        AttackConfig a;
        a.l = 10;
        a.m = 8;
        a.trials = 12500;
        a.seed = sub_seed(3);
        a.z = 2.5758293035489004;
        const AttackReport r = attack_multicopy_majority(a);
        const Metric& m = r.metric("per_bit_success");
        rows.push_back(ReportRow::in_range("c3.majority_l10_above_0.99", m.estimate, 0.99, 1.0, m.exact));
        rows.push_back(ReportRow::from_metric(m, "c3.majority_l10_wilson99_"));
    }
    {
        rows.push_back(ReportRow::within("c4.usd_l10_closed_form", cf.all_inconclusive(10), 1.0 / 32.0, 1e-15));
        AttackConfig a;
        a.l = 10;
        a.m = 8;
        a.trials = 12500;
        a.seed = sub_seed(4);
        const AttackReport r = attack_multicopy_usd(a);
        const Metric& m = r.metric("inconclusive_rate");
        rows.push_back(ReportRow::from_metric(m, "c4.usd_l10_"));
        rows.push_back(ReportRow::in_range("c4.usd_l10_below_0.05", m.estimate, 0.0, 0.05, m.exact));
    }
    {
        for (int l = 2; l <= 64; ++l) {
            const BoundReport b = success_bounds(BinomialModel{l, cf.p_success});
            rows.push_back(ReportRow::in_range("c5.sandwich[l=" + std::to_string(l) + "]", b.exact_success,
                                               b.lower_bound, b.upper_bound, b.exact_success));
        }
        const BoundReport b = success_bounds(BinomialModel{10, cf.p_success});
        rows.push_back(ReportRow::within("c5.l10_lower", b.lower_bound, 0.9687, 1e-3));
        rows.push_back(ReportRow::within("c5.l10_exact", b.exact_success, 0.9911, 1e-3));
        rows.push_back(ReportRow::within("c5.l10_upper", b.upper_bound, 0.9930, 1e-3));
    }
    {
        for (int block = 0; block < 4; ++block) {
            AttackConfig a;
            a.l = 2;
            a.m = 2;
            a.trials = 500000;
            a.fixed_state = block;
            a.seed = sub_seed(60 + static_cast<std::uint64_t>(block));
            const AttackReport r = attack_zhang2_basis_split(a);
            double linf = 0.0;
            for (const Metric& m : r.metrics) {
                if (m.name.rfind("dist[", 0) == 0) {
                    linf = std::max(linf, std::abs(m.estimate - m.exact));
                }
            }
            rows.push_back(ReportRow::within("c6.basis_split_linf[block=" + std::to_string(block) + "]",
                                             linf, 0.0, 0.005));
        }
    }
    {
        AttackConfig a;
        a.m = 8;
        a.trials = 10000;
        a.seed = sub_seed(7);
        const AttackReport both = attack_cnot(CnotMode::both_ways, a);
        const Metric& det = both.metric("detection_rate");
        rows.push_back(ReportRow::within("c7.both_ways_detections", static_cast<double>(det.successes), 0.0, 0.0));
        rows.push_back(
            ReportRow::within("c7.both_ways_min_purity", both.metric("min_ancilla_purity").estimate, 1.0, 1e-12));
        rows.push_back(ReportRow::in_range("c7.both_ways_mutual_information",
                                           both.metric("mutual_information_bits").estimate, 0.0, 1e-3, 0.0));
        a.seed = sub_seed(70);
        const AttackReport ret = attack_cnot(CnotMode::return_only, a);
        rows.push_back(ReportRow::within("c7.return_only_diagonal_detection",
                                         ret.metric("diagonal_detection").estimate, 0.5, 0.01));
        rows.push_back(
            ReportRow::within("c7.return_only_detection", ret.metric("detection_rate").estimate, 0.25, 0.01));
    }
    {
        SessionConfig sc;
        sc.num_parties = 4;
        sc.bid_length = 8;
        sc.delta = 0.25;
        const std::uint64_t sessions = 1000;
        SqsbaCampaign all;
        const SqsbaCampaign honest = run_sqsba_campaign(sc, "none", sessions, sub_seed(8));
        all += honest;
        rows.push_back(ReportRow::within("c8.honest_fair_rate", ratio(honest.fair, honest.sessions), 1.0, 0.0));
        rows.push_back(ReportRow::within("c8.honest_correct_winner_rate",
                                         ratio(honest.correct_winner, honest.sessions), 1.0, 0.0));
        std::uint64_t k = 80;
        for (const char* adversary : {"false_order", "enc_flip", "swap"}) {
            const SqsbaCampaign c = run_sqsba_campaign(sc, adversary, sessions, sub_seed(++k));
            all += c;
            const std::string tag = std::string("c8.") + adversary;
            rows.push_back(ReportRow::in_range(tag + "_altered_sessions", static_cast<double>(c.altered), 1.0,
                                               static_cast<double>(c.sessions),
                                               std::numeric_limits<double>::quiet_NaN()));
            rows.push_back(ReportRow::within(tag + "_unfair_given_altered", ratio(c.altered_unfair, c.altered), 1.0, 0.0));
        }
        rows.push_back(ReportRow::within("c9.semi_quantum_sessions", ratio(all.semi_quantum, all.sessions), 1.0, 0.0));
    }
    return report;
}

Report run_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind == "attack") return cmd_attack(cfg);
    if (cfg.kind == "protocol") return cmd_protocol(cfg);
    if (cfg.kind == "bounds") return cmd_bounds(cfg);
    if (cfg.kind == "reproduce") return cmd_reproduce(cfg);
    throw std::invalid_argument("unknown experiment kind: '" + cfg.kind + "'");
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Quantum and semi-quantum sealed-bid auction lab"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int l = 0;
    int m = 0;
    int n_parties = 0;
    double delta = 0.0;
    double threshold = 0.0;
    double z = 0.0;
    std::string out;
    std::string format;
    std::string cnot_mode;
    std::string defense;
    std::string against;
    std::string disturbance;
    std::string collusion;
    std::string q_pub;
    int fixed_bit = 0;
    int fixed_state = 0;
    std::size_t decoys = 0;
    std::string adversary;
    std::string transcript;
    std::string target;

    auto* o_config = app.add_option("--config", config_path, "JSON experiment config; flags override its values");
    auto* o_seed = app.add_option("--seed", seed, "Master seed");
    auto* o_trials = app.add_option("--trials", trials, "Monte Carlo trials or sessions")
                         ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
    auto* o_l = app.add_option("--l", l, "Copies or colluders; bounds: the l to report (default 2..64)");
    auto* o_m = app.add_option("--m", m, "Bid length");
    auto* o_n = app.add_option("--N", n_parties, "Parties including the auctioneer");
    auto* o_delta = app.add_option("--delta", delta, "sqsba check-qubit overhead");
    auto* o_threshold = app.add_option("--threshold", threshold, "Error threshold for eavesdropping checks");
    auto* o_z = app.add_option("--z", z, "Wilson interval width in standard deviations");
    auto* o_out = app.add_option("--out", out, "Report path (default: standard output)");
    auto* o_format = app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    auto* o_mode = app.add_option("--mode", cnot_mode, "CNOT attack mode")->check(CLI::IsMember({"both_ways", "return_only"}));
    auto* o_defense = app.add_option("--defense", defense, "Permutation defense")->check(CLI::IsMember({"on", "off"}));
    auto* o_against = app.add_option("--against", against, "False-permutation target")->check(CLI::IsMember({"liu", "sqsba"}));
    auto* o_disturbance = app.add_option("--disturbance", disturbance, "Disturbance mode")
                              ->check(CLI::IsMember({"flip", "random_replace"}));
    auto* o_remedy = app.add_flag("--remedy", "Liu return-path decoys");
    auto* o_decoys = app.add_option("--decoys", decoys, "Decoys per protected sequence");
    auto* o_collusion = app.add_option("--collusion", collusion, "Colluders' decision rule")
                            ->check(CLI::IsMember({"majority", "usd"}));
    auto* o_fixed_bit = app.add_option("--fixed-bit", fixed_bit, "Use this value for every bid bit")->check(CLI::Range(0, 1));
    auto* o_fixed_state = app.add_option("--fixed-state", fixed_state, "basis_split: fixed two-bit block")->check(CLI::Range(0, 3));
    auto* o_q_pub = app.add_option("--q-pub", q_pub, "basis_split public state (0, 1, +, -)");
    auto* o_adversary = app.add_option("--adversary", adversary, "protocol sqsba adversary")
                            ->check(CLI::IsMember({"none", "false_order", "enc_flip", "swap"}));
    auto* o_transcript = app.add_option("--transcript", transcript, "protocol: write the first session's transcript");

    auto* attack = app.add_subcommand("attack", "Run one attack and compare with its exact predictions");
    attack->add_option("name", target, "Attack name")->required();
    attack->fallthrough();
    auto* protocol = app.add_subcommand("protocol", "Run seeded honest (or adversarial sqsba) sessions");
    protocol->add_option("variant", target, "liu, zhang1, zhang2 or sqsba")->required();
    protocol->fallthrough();
    auto* bounds = app.add_subcommand("bounds", "Check the majority-vote success bounds");
    bounds->fallthrough();
    auto* reproduce = app.add_subcommand("reproduce", "Run every acceptance check in one table");
    reproduce->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ExperimentConfig cfg;
        if (o_config->count() > 0) {
            cfg = load_experiment_config(config_path);
        }
        for (auto* sub : {attack, protocol, bounds, reproduce}) {
            if (sub->parsed()) {
                cfg.kind = sub->get_name();
            }
        }
        if (attack->parsed() || protocol->parsed()) {
            cfg.target = target;
        }
        if (cfg.kind.empty()) {
            std::cerr << "no experiment: give a subcommand or a --config with a kind\n" << app.help();
            return 2;
        }
        AttackConfig& p = cfg.params;
        if (o_seed->count()) p.seed = seed;
        if (o_trials->count()) p.trials = trials;
        if (o_l->count()) p.l = l;
        if (o_m->count()) p.m = m;
        if (o_n->count()) p.N = n_parties;
        if (o_delta->count()) p.delta = delta;
        if (o_threshold->count()) p.threshold = threshold;
        if (o_z->count()) p.z = z;
        if (o_out->count()) cfg.out = out;
        if (o_format->count()) cfg.format = parse_format(format);
        if (o_mode->count()) p.cnot_mode = parse_cnot_mode(cnot_mode);
        if (o_defense->count()) p.defense = defense == "on";
        if (o_against->count()) p.against = parse_false_permutation_target(against);
        if (o_disturbance->count()) p.disturbance = parse_disturbance_mode(disturbance);
        if (o_remedy->count()) p.remedy = true;
        if (o_decoys->count()) p.decoys = decoys;
        if (o_collusion->count()) p.collusion = parse_collusion_method(collusion);
        if (o_fixed_bit->count()) p.fixed_bit = fixed_bit;
        if (o_fixed_state->count()) p.fixed_state = fixed_state;
        if (o_q_pub->count()) p.q_pub = parse_q_pub(q_pub);
        if (o_adversary->count()) cfg.adversary = adversary;
        if (o_transcript->count()) cfg.transcript_path = transcript;

        const Report report = run_experiment(cfg);
        const std::string text = render(report, cfg.format);
        if (cfg.out.empty()) {
            std::cout << text;
        } else {
            write_text(cfg.out, text);
        }
        std::size_t passed = 0;
        for (const ReportRow& r : report.rows) {
            passed += r.pass ? 1 : 0;
        }
        std::cerr << report.kind << ' ' << report.target << ": " << passed << '/' << report.rows.size()
                  << " rows pass\n";
        return report.passed() ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace qsba
