#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "qsba/attacks.hpp"
#include "qsba/harness.hpp"
#include "qsba/legacy.hpp"
#include "qsba/sqsba.hpp"
#include "qsba/stats.hpp"

namespace py = pybind11;
using namespace qsba;

namespace {

std::vector<BidString> parse_bids(const std::vector<std::string>& bids) {
    std::vector<BidString> out;
    for (std::size_t i = 0; i < bids.size(); ++i) {
        out.push_back(BidString::parse(static_cast<PartyId>(i + 1), bids[i]));
    }
    return out;
}

py::dict metric_dict(const Metric& m) {
    py::dict d;
    d["estimate"] = m.estimate;
    d["ci"] = py::make_tuple(m.ci.low, m.ci.high);
    d["exact"] = m.exact;
    d["successes"] = m.successes;
    d["trials"] = m.trials;
    d["tolerance"] = m.tolerance ? py::cast(*m.tolerance) : py::none();
    d["consistent"] = m.consistent();
    return d;
}

py::dict outcome_dict(const AuctionOutcome& o, const Transcript& transcript) {
    py::dict d;
    d["verdict"] = std::string(to_string(o.verdict));
    d["winner"] = o.winner ? py::cast(*o.winner) : py::none();
    d["winning_bid"] = o.winning_bid ? py::cast(o.winning_bid->to_string()) : py::none();
    d["abort_stage"] = o.abort_stage;
    d["transcript_events"] = transcript.size();
    return d;
}

std::unique_ptr<Adversary> make_sqsba_adversary(const std::string& name) {
    if (name == "none") return nullptr;
    if (name == "false_order") return std::make_unique<FalseEncOrderAdversary>();
    if (name == "enc_flip") return std::make_unique<EncFlipAdversary>();
    if (name == "swap") return std::make_unique<SwapAdversary>();
    throw std::invalid_argument("unknown adversary: '" + name + "'");
}

} // namespace

PYBIND11_MODULE(_qsba, m) {
    m.doc() = "Quantum and semi-quantum sealed-bid auction simulator";

    py::register_exception<ProtocolFault>(m, "ProtocolFault", PyExc_RuntimeError);

    m.def("closed_forms", [] {
        const ClosedForms& cf = closed_forms();
        py::dict d;
        d["p_success"] = cf.p_success;
        d["p_error"] = cf.p_error;
        d["p_inconclusive"] = cf.p_inconclusive;
        return d;
    });

    m.def(
        "success_bounds",
        [](int l, std::optional<double> p) {
            const BoundReport b = success_bounds(BinomialModel{l, p.value_or(closed_forms().p_success)});
            py::dict d;
            d["l"] = b.l;
            d["lower"] = b.lower_bound;
            d["exact"] = b.exact_success;
            d["upper"] = b.upper_bound;
            d["valid"] = b.valid;
            return d;
        },
        py::arg("l"), py::arg("p") = py::none(),
        "Majority-vote success over l copies with its lower and upper bounds.");

    m.def(
        "wilson_interval",
        [](std::uint64_t successes, std::uint64_t trials, double z) {
            const Interval i = wilson_interval(successes, trials, z);
            return py::make_tuple(i.low, i.high);
        },
        py::arg("successes"), py::arg("trials"), py::arg("z") = 4.0);

    m.def("liu_false_permutation_success", &liu_false_permutation_success, py::arg("m"));
    m.def("swap_check_detection", &swap_check_detection, py::arg("n"));
    m.def("attack_names", &attack_names);

    py::class_<AttackConfig>(m, "AttackConfig")
        .def(py::init<>())
        .def_readwrite("l", &AttackConfig::l)
        .def_readwrite("m", &AttackConfig::m)
        .def_readwrite("N", &AttackConfig::N)
        .def_readwrite("trials", &AttackConfig::trials)
        .def_readwrite("seed", &AttackConfig::seed)
        .def_readwrite("z", &AttackConfig::z)
        .def_readwrite("fixed_bit", &AttackConfig::fixed_bit)
        .def_readwrite("fixed_state", &AttackConfig::fixed_state)
        .def_readwrite("defense", &AttackConfig::defense)
        .def_readwrite("remedy", &AttackConfig::remedy)
        .def_readwrite("decoys", &AttackConfig::decoys)
        .def_readwrite("delta", &AttackConfig::delta)
        .def_readwrite("threshold", &AttackConfig::threshold)
        .def_property(
            "cnot_mode", [](const AttackConfig& c) { return std::string(to_string(c.cnot_mode)); },
            [](AttackConfig& c, const std::string& v) { c.cnot_mode = parse_cnot_mode(v); })
        .def_property(
            "against", [](const AttackConfig& c) { return std::string(to_string(c.against)); },
            [](AttackConfig& c, const std::string& v) { c.against = parse_false_permutation_target(v); })
        .def_property(
            "disturbance", [](const AttackConfig& c) { return std::string(to_string(c.disturbance)); },
            [](AttackConfig& c, const std::string& v) { c.disturbance = parse_disturbance_mode(v); })
        .def_property(
            "collusion", [](const AttackConfig& c) { return std::string(to_string(c.collusion)); },
            [](AttackConfig& c, const std::string& v) { c.collusion = parse_collusion_method(v); })
        .def_property(
            "q_pub", [](const AttackConfig& c) { return std::string(to_string(c.q_pub)); },
            [](AttackConfig& c, const std::string& v) { c.q_pub = parse_state_label(v); })
        .def("validate", &AttackConfig::validate);

    m.def(
        "run_attack",
        [](const std::string& name, const AttackConfig& cfg) {
            AttackReport r;
            {
                py::gil_scoped_release release;
                r = run_attack(name, cfg);
            }
            py::dict metrics;
            for (const Metric& metric : r.metrics) {
                metrics[py::str(metric.name)] = metric_dict(metric);
            }
            py::dict d;
            d["attack"] = r.attack;
            d["metrics"] = metrics;
            d["consistent"] = r.all_consistent();
            return d;
        },
        py::arg("name"), py::arg("config"));

    m.def(
        "run_sqsba",
        [](const std::vector<std::string>& bids, double delta, std::uint64_t seed, const std::string& adversary,
           bool permutation_defense) {
            SessionConfig cfg;
            cfg.num_parties = static_cast<int>(bids.size()) + 1;
            cfg.bid_length = bids.empty() ? 0 : static_cast<int>(bids.front().size());
            cfg.delta = delta;
            cfg.seed = seed;
            cfg.permutation_defense = permutation_defense;
            const std::vector<BidString> parsed = parse_bids(bids);
            std::unique_ptr<Adversary> eve = make_sqsba_adversary(adversary);
            const SqsbaRun run = run_sqsba(cfg, parsed, eve.get());
            py::dict d = outcome_dict(run.outcome, run.transcript);
            py::dict semi;
            for (PartyId p = 1; p <= cfg.bidders(); ++p) {
                semi[py::int_(p)] = run.audit.semi_quantum(p);
            }
            d["semi_quantum"] = semi;
            return d;
        },
        py::arg("bids"), py::arg("delta") = 0.25, py::arg("seed") = 0, py::arg("adversary") = "none",
        py::arg("permutation_defense") = true,
        "One semi-quantum auction; bids are bit strings of equal length, bidder i + 1 holding bids[i].");

    m.def(
        "run_legacy",
        [](const std::string& variant, const std::vector<std::string>& bids, std::uint64_t seed) {
            const std::vector<BidString> parsed = parse_bids(bids);
            Rng rng(seed);
            const LegacyRun run = run_legacy(parse_legacy_variant(variant), parsed, LegacyConfig{}, nullptr, rng);
            return outcome_dict(run.outcome, run.transcript);
        },
        py::arg("variant"), py::arg("bids"), py::arg("seed") = 0);

    m.def(
        "bid_digest",
        [](const std::string& key_hex, const std::string& bid) {
            if (key_hex.size() != 64) {
                throw std::invalid_argument("key must be 64 hex digits");
            }
            Bytes32 key{};
            for (std::size_t i = 0; i < key.size(); ++i) {
                key[i] = static_cast<std::uint8_t>(std::stoul(key_hex.substr(2 * i, 2), nullptr, 16));
            }
            return to_hex(bid_digest(key, BidString::parse(1, bid)));
        },
        py::arg("key_hex"), py::arg("bid"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"qsba"};
            for (const std::string& a : args) {
                argv.push_back(a.c_str());
            }
            py::gil_scoped_release release;
            return run_cli(static_cast<int>(argv.size()), argv.data());
        },
        py::arg("args"), "Runs the command-line harness in-process and returns its exit code.");
}
