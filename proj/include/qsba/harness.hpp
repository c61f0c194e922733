#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsba/attacks.hpp"
#include "qsba/sqsba.hpp"
#include "qsba/stats.hpp"

namespace qsba {

enum class ReportFormat { csv, json };

/// One experiment, as read from a config file and overridden by flags.
struct ExperimentConfig {
    /// attack, protocol, bounds or reproduce.
    std::string kind;
    /// Attack name or protocol variant (liu, zhang1, zhang2, sqsba).
    std::string target;
    /// Attack parameters; also supplies l, m, N, delta, trials, threshold
    /// and seed to the other kinds.
    AttackConfig params;
    /// protocol sqsba: none, false_order, enc_flip or swap.
    std::string adversary = "none";
    /// protocol: write the first session's transcript here (JSON lines).
    std::string transcript_path;
    std::string out;
    ReportFormat format = ReportFormat::csv;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Reads a JSON object whose keys mirror ExperimentConfig and AttackConfig
/// field names (kind, target, l, m, N, delta, trials, threshold, seed, out,
/// format, cnot_mode, defense, ...). Unknown keys are rejected.
ExperimentConfig load_experiment_config(const std::string& path);

/// How a row's pass flag is derived from its numbers.
enum class PassRule {
    /// exact lies in [ci_low, ci_high].
    ci,
    /// |estimate - exact| <= tolerance.
    tolerance,
    /// estimate lies in [ci_low, ci_high]; exact is shown for reference.
    range,
};

std::string_view to_string(PassRule rule);

struct ReportRow {
    std::string metric;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double exact = 0.0;
    std::optional<double> tolerance;
    PassRule rule = PassRule::ci;
    bool pass = false;

    static ReportRow from_metric(const Metric& m, std::string_view prefix = {});
    static ReportRow within(std::string metric, double estimate, double exact, double tolerance);
    static ReportRow in_range(std::string metric, double estimate, double low, double high, double reference);
};

struct Report {
    std::string kind;
    std::string target;
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;

    bool passed() const;
};

/// Columns: metric,estimate,ci_low,ci_high,exact,tolerance,rule,pass.
std::string to_csv(const Report& report);
std::string to_json(const Report& report);
std::string render(const Report& report, ReportFormat format);

/// Counts over seeded sqsba sessions with random bids.
struct SqsbaCampaign {
    std::uint64_t sessions = 0;
    std::uint64_t fair = 0;
    std::uint64_t unfair = 0;
    std::uint64_t aborted = 0;
    std::uint64_t correct_winner = 0;
    /// Announced winning bid differs from the winner's committed bid.
    std::uint64_t altered = 0;
    std::uint64_t altered_unfair = 0;
    std::uint64_t keys_agreed = 0;
    /// Sessions in which every bidder's audit is semi-quantum.
    std::uint64_t semi_quantum = 0;

    SqsbaCampaign& operator+=(const SqsbaCampaign& o);
};

/// `adversary` is one of none, false_order, enc_flip, swap; swap sessions
/// run without the permutation defense.
SqsbaCampaign run_sqsba_campaign(const SessionConfig& base, std::string_view adversary, std::uint64_t sessions,
                                 std::uint64_t seed);

Report cmd_attack(const ExperimentConfig& cfg);
Report cmd_protocol(const ExperimentConfig& cfg);
/// Sandwich rows for the given l, or for every l in [2, 64] when l is 1.
Report cmd_bounds(const ExperimentConfig& cfg);
/// Every acceptance check that the library can evaluate on its own, with
/// fixed sample sizes; only the seed is configurable.
Report cmd_reproduce(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg);

/// Command-line entry point. Returns 0 when every row passes, 1 when one
/// fails and 2 on a usage or configuration error.
int run_cli(int argc, const char* const* argv);

} // namespace qsba
