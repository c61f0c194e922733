#include "qsba/attacks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qsba/parallel.hpp"
#include "qsba/sqsba.hpp"

namespace qsba {

std::string_view to_string(CnotMode mode) { return mode == CnotMode::both_ways ? "both_ways" : "return_only"; }
std::string_view to_string(FalsePermutationTarget target) {
    return target == FalsePermutationTarget::liu ? "liu" : "sqsba";
}
std::string_view to_string(DisturbanceMode mode) { return mode == DisturbanceMode::flip ? "flip" : "random_replace"; }
std::string_view to_string(CollusionMethod method) { return method == CollusionMethod::majority ? "majority" : "usd"; }

CnotMode parse_cnot_mode(std::string_view name) {
    if (name == "both_ways") return CnotMode::both_ways;
    if (name == "return_only") return CnotMode::return_only;
    throw std::invalid_argument("unknown CNOT mode: " + std::string(name));
}

FalsePermutationTarget parse_false_permutation_target(std::string_view name) {
    if (name == "liu") return FalsePermutationTarget::liu;
    if (name == "sqsba") return FalsePermutationTarget::sqsba;
    throw std::invalid_argument("unknown false-permutation target: " + std::string(name));
}

DisturbanceMode parse_disturbance_mode(std::string_view name) {
    if (name == "flip") return DisturbanceMode::flip;
    if (name == "random_replace") return DisturbanceMode::random_replace;
    throw std::invalid_argument("unknown disturbance mode: " + std::string(name));
}

CollusionMethod parse_collusion_method(std::string_view name) {
    if (name == "majority") return CollusionMethod::majority;
    if (name == "usd") return CollusionMethod::usd;
    throw std::invalid_argument("unknown collusion method: " + std::string(name));
}

void AttackConfig::validate() const {
    if (l < 1) {
        throw std::invalid_argument("l must be positive");
    }
    if (m < 1 || m > 64) {
        throw std::invalid_argument("m must lie in [1, 64]");
    }
    if (parties() < 3) {
        throw std::invalid_argument("N must be at least 3");
    }
    if (l > parties() - 2) {
        throw std::invalid_argument("l copies need N >= l + 2");
    }
    if (trials < 1) {
        throw std::invalid_argument("trials must be positive");
    }
    if (!(z > 0.0)) {
        throw std::invalid_argument("z must be positive");
    }
    if (fixed_bit && *fixed_bit != 0 && *fixed_bit != 1) {
        throw std::invalid_argument("fixed bit must be 0 or 1");
    }
    if (fixed_state && (*fixed_state < 0 || *fixed_state > 3)) {
        throw std::invalid_argument("fixed state must lie in [0, 3]");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("delta must be positive");
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("threshold must lie in [0, 1]");
    }
}

bool AttackReport::has(std::string_view name) const {
    return std::any_of(metrics.begin(), metrics.end(), [&](const Metric& m) { return m.name == name; });
}

const Metric& AttackReport::metric(std::string_view name) const {
    for (const Metric& m : metrics) {
        if (m.name == name) {
            return m;
        }
    }
    throw std::out_of_range("no metric named " + std::string(name));
}

bool AttackReport::all_consistent() const {
    return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.consistent(); });
}

double liu_false_permutation_success(int m) {
    if (m < 1 || m > 64) {
        throw std::invalid_argument("m must lie in [1, 64]");
    }
    const int blocks = (m + 1) / 2;
    if (blocks < 2) {
        return 0.0;
    }
    if (m % 2 == 0) {
        return 1.0 - std::pow(4.0, 1 - blocks);
    }
    return 1.0 - 3.0 * std::pow(4.0, 1 - blocks);
}

double swap_check_detection(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("empty sequence");
    }
    return static_cast<double>(n - 1) / (2.0 * static_cast<double>(n));
}

double decoy_abort_probability(std::size_t decoys, double p_error, double threshold, int bidders) {
    if (decoys == 0 || p_error <= 0.0) {
        return 0.0;
    }
    const int c = static_cast<int>(decoys);
    int tolerated = -1;
    for (int k = 0; k <= c; ++k) {
        if (static_cast<double>(k) / c <= threshold) {
            tolerated = k;
        }
    }
    double pass = 0.0;
    if (p_error >= 1.0) {
        pass = tolerated >= c ? 1.0 : 0.0;
    } else if (tolerated >= 0) {
        pass = binom_cdf(BinomialModel{c, p_error}, tolerated);
    }
    return 1.0 - std::pow(pass, bidders);
}

std::optional<PermutationOp> liu_alternative_order(const BidString& bid) {
    const std::vector<int> code = bid.two_bit_blocks();
    const bool padded = bid.size() % 2 == 1;
    for (std::size_t a = 0; a < code.size(); ++a) {
        for (std::size_t b = a + 1; b < code.size(); ++b) {
            if (code[a] == code[b] || (padded && a == 0 && code[b] > 1)) {
                continue;
            }
            std::vector<std::size_t> mapping(code.size());
            for (std::size_t i = 0; i < mapping.size(); ++i) {
                mapping[i] = i;
            }
            std::swap(mapping[a], mapping[b]);
            return PermutationOp(std::move(mapping));
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Adversaries

std::string CnotAdversary::name() const { return "CNOT " + std::string(to_string(mode_)); }

bool CnotAdversary::on_transit(const Link& link, QubitSequence& qubits, Rng& rng) {
    if (link.stage == Stage::bid_forward) {
        if (mode_ != CnotMode::both_ways) {
            return false;
        }
        std::vector<QubitRef>& anc = ancillas_[link.to];
        anc.clear();
        for (std::size_t p = 0; p < qubits.size(); ++p) {
            anc.push_back(qubits.attach_ancilla(p));
            qubits.apply(qubits.ref(p), anc.back(), UnitaryOp::cnot());
        }
        return true;
    }
    if (link.stage != Stage::bid_return) {
        return false;
    }
    std::vector<QubitRef> anc;
    if (mode_ == CnotMode::both_ways) {
        anc = ancillas_.at(link.from);
        if (anc.size() != qubits.size()) {
            throw std::logic_error("returned sequence length changed under the CNOT attack");
        }
        for (std::size_t p = 0; p < qubits.size(); ++p) {
            qubits.apply(qubits.ref(p), anc[p], UnitaryOp::cnot());
            const std::array<int, 1> side{anc[p].slot};
            min_purity_ = std::min(min_purity_, is_product(qubits.register_state(anc[p].reg), side).purity);
        }
    } else {
        for (std::size_t p = 0; p < qubits.size(); ++p) {
            anc.push_back(qubits.attach_ancilla(p));
            qubits.apply(qubits.ref(p), anc.back(), UnitaryOp::cnot());
        }
    }
    readout_.clear();
    for (std::size_t p : link.data_positions) {
        readout_.push_back(static_cast<int>(qubits.measure(anc[p], z_basis(), rng)));
    }
    return true;
}

bool SwapAdversary::on_transit(const Link& link, QubitSequence& qubits, Rng& rng) {
    if (link.stage == Stage::bid_forward) {
        QubitSequence fake;
        for (std::size_t p = 0; p < qubits.size(); ++p) {
            fake.append(prepare_named(bb84_random(rng)));
        }
        stash_[link.to] = std::move(qubits);
        qubits = std::move(fake);
        return true;
    }
    if (link.stage != Stage::bid_return) {
        return false;
    }
    auto it = stash_.find(link.from);
    if (it == stash_.end()) {
        return false;
    }
    std::vector<int>& bits = recovered_[link.from];
    bits.clear();
    for (std::size_t p : link.data_positions) {
        bits.push_back(static_cast<int>(qubits.measure(p, z_basis(), rng)));
    }
    qubits = std::move(it->second);
    stash_.erase(it);
    return true;
}

bool EncFlipAdversary::on_transit(const Link& link, QubitSequence& qubits, Rng& rng) {
    (void)rng;
    if (link.stage != Stage::bid_return || link.data_positions.empty()) {
        return false;
    }
    for (std::size_t p : link.data_positions) {
        qubits.apply(p, UnitaryOp::i_sigma_y());
    }
    return true;
}

std::vector<std::size_t> FalseEncOrderAdversary::announce_enc_order(PartyId bidder,
                                                                    const std::vector<std::size_t>& honest,
                                                                    const BidString& own_bid) {
    if (attacker_ && *attacker_ != bidder) {
        return honest;
    }
    std::vector<std::size_t> ones;
    std::vector<std::size_t> zeros;
    for (std::size_t t = 0; t < honest.size(); ++t) {
        (own_bid.bit(static_cast<int>(t)) == 1 ? ones : zeros).push_back(honest[t]);
    }
    ones.insert(ones.end(), zeros.begin(), zeros.end());
    return ones;
}

BidString LiuFalsePermutationAdversary::announce_winning_bid(PartyId winner, const BidString& decoded) {
    sigma_.reset();
    if (winner != attacker_) {
        return decoded;
    }
    sigma_ = liu_alternative_order(decoded);
    if (!sigma_) {
        return decoded;
    }
    const std::vector<int> code = decoded.two_bit_blocks();
    std::vector<int> altered(code.size());
    for (std::size_t p = 0; p < code.size(); ++p) {
        altered[p] = code[(*sigma_)(p)];
    }
    return BidString::from_two_bit_blocks(winner, altered, decoded.size());
}

PermutationOp LiuFalsePermutationAdversary::announce_pair_permutation(PartyId winner, PartyId verifier,
                                                                      const PermutationOp& honest,
                                                                      const BidString& committed) {
    (void)verifier;
    (void)committed;
    if (winner != attacker_ || !sigma_) {
        return honest;
    }
    return sigma_->then(honest);
}

std::string LiuDisturbanceAdversary::name() const { return "disturbance " + std::string(to_string(mode_)); }

bool LiuDisturbanceAdversary::on_transit(const Link& link, QubitSequence& qubits, Rng& rng) {
    if (link.stage != Stage::bid_return) {
        return false;
    }
    for (std::size_t p = 0; p < qubits.size(); ++p) {
        if (mode_ == DisturbanceMode::flip) {
            qubits.apply(p, UnitaryOp::i_sigma_y());
        } else {
            qubits.replace(p, prepare_named(bb84_random(rng)), rng);
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Discriminating |0> from |+>

namespace {

using Probs = std::vector<double>;

int draw_bit(const AttackConfig& cfg, Rng& rng) { return cfg.fixed_bit ? *cfg.fixed_bit : rng.bit(); }

BidString draw_bid(const AttackConfig& cfg, PartyId owner, Rng& rng) {
    if (cfg.fixed_bit) {
        return BidString(owner, std::vector<std::uint8_t>(static_cast<std::size_t>(cfg.m),
                                                          static_cast<std::uint8_t>(*cfg.fixed_bit)));
    }
    return BidString::random(owner, cfg.m, rng);
}

/// Born probabilities for the two Zhang-1 states, per measurement.
struct Zhang1Tables {
    std::array<Probs, 2> tau;
    std::array<Probs, 2> usd;
    /// verify[guess][bit]: probability that a resent zhang1_encode(guess)
    /// fails the check of a verifier who expects `bit`.
    std::array<std::array<Probs, 2>, 2> verify;

    Zhang1Tables() {
        const std::array<int, 1> target{0};
        const Povm povm = usd_povm(std::numbers::pi / 4.0);
        for (int b = 0; b < 2; ++b) {
            const StateVector s = zhang1_encode(b);
            tau[static_cast<std::size_t>(b)] = outcome_probabilities(s, tau_basis(), target);
            usd[static_cast<std::size_t>(b)] = povm.probabilities(s);
            for (int expect = 0; expect < 2; ++expect) {
                verify[static_cast<std::size_t>(b)][static_cast<std::size_t>(expect)] =
                    outcome_probabilities(s, expect == 0 ? z_basis() : x_basis(), target);
            }
        }
    }
};

const Zhang1Tables& zhang1_tables() {
    static const Zhang1Tables tables;
    return tables;
}

struct CopyTally {
    std::uint64_t bits = 0;
    std::uint64_t correct = 0;
    std::uint64_t unresolved = 0;
    std::uint64_t conclusive_wrong = 0;
    std::uint64_t detected = 0;
    std::uint64_t resolved_detected = 0;
    std::uint64_t bids = 0;
    std::uint64_t bids_correct = 0;

    CopyTally& operator+=(const CopyTally& o) {
        bits += o.bits;
        correct += o.correct;
        unresolved += o.unresolved;
        conclusive_wrong += o.conclusive_wrong;
        detected += o.detected;
        resolved_detected += o.resolved_detected;
        bids += o.bids;
        bids_correct += o.bids_correct;
        return *this;
    }
};

/// One bid's worth of copies, measured by `streams[k]` for copy k. When
/// `resend` is set the attacker forwards zhang1_encode(guess) in place of
/// every copy and the verifier checks each one.
void copy_attack_trial(const AttackConfig& cfg, CollusionMethod method, std::vector<Rng*> streams, bool resend,
                       Rng& rng, CopyTally& tally) {
    const Zhang1Tables& tab = zhang1_tables();
    const int l = static_cast<int>(streams.size());
    const int need = l / 2 + 1;
    bool all_correct = true;
    for (int t = 0; t < cfg.m; ++t) {
        const int bit = draw_bit(cfg, rng);
        const auto b = static_cast<std::size_t>(bit);
        int decision = -1;
        if (method == CollusionMethod::majority) {
            int tau1 = 0;
            for (Rng* s : streams) {
                tau1 += sample_index(tab.tau[b], *s) == 0 ? 1 : 0;
            }
            decision = tau1 >= need ? 0 : (l - tau1 >= need ? 1 : -1);
        } else {
            for (Rng* s : streams) {
                const std::size_t o = sample_index(tab.usd[b], *s);
                if (o < 2) {
                    tally.conclusive_wrong += static_cast<int>(o) != bit ? 1 : 0;
                    decision = static_cast<int>(o);
                }
            }
        }
        ++tally.bits;
        tally.unresolved += decision < 0 ? 1 : 0;
        const bool correct = decision == bit;
        tally.correct += correct ? 1 : 0;
        all_correct = all_correct && correct;
        if (resend) {
            const int guess = decision >= 0 ? decision : rng.bit();
            bool detected = false;
            for (int k = 0; k < l; ++k) {
                detected = (sample_index(tab.verify[static_cast<std::size_t>(guess)][b], rng) == 1) || detected;
            }
            tally.detected += detected ? 1 : 0;
            tally.resolved_detected += (detected && decision >= 0) ? 1 : 0;
        }
    }
    ++tally.bids;
    tally.bids_correct += all_correct ? 1 : 0;
}

double majority_wrong_guess(int l) {
    const BinomialModel model{l, closed_forms().p_success};
    double wrong = binom_cdf(model, (l + 1) / 2 - 1);
    if (l % 2 == 0) {
        wrong += binom_pmf(model, l / 2) / 2.0;
    }
    return wrong;
}

AttackReport copy_attack(const AttackConfig& cfg, std::string name, CollusionMethod method, bool collusion,
                         bool resend) {
    cfg.validate();
    const int l = cfg.l;
    const CopyTally t = run_trials<CopyTally>(cfg.trials, cfg.seed, [&](std::uint64_t, Rng& rng, CopyTally& tally) {
        std::vector<Rng> own;
        std::vector<Rng*> streams;
        if (collusion) {
            own.reserve(static_cast<std::size_t>(l));
            for (int k = 0; k < l; ++k) {
                own.push_back(rng.child(static_cast<std::uint64_t>(k + 1)));
            }
            for (Rng& r : own) {
                streams.push_back(&r);
            }
        } else {
            streams.assign(static_cast<std::size_t>(l), &rng);
        }
        copy_attack_trial(cfg, method, streams, resend, rng, tally);
    });

    const ClosedForms& cf = closed_forms();
    AttackReport r;
    r.attack = std::move(name);
    if (method == CollusionMethod::majority) {
        const double tie = l % 2 == 0 ? binom_pmf(BinomialModel{l, cf.p_success}, l / 2) : 0.0;
        r.metrics.push_back(Metric::proportion("per_bit_success", t.correct, t.bits, cf.majority_success(l), cfg.z));
        r.metrics.push_back(
            Metric::proportion("whole_bid_success", t.bids_correct, t.bids, cf.majority_whole_bid(l, cfg.m), cfg.z));
        r.metrics.push_back(Metric::proportion("tie_rate", t.unresolved, t.bits, tie, cfg.z));
        r.metrics.push_back(Metric::proportion(
            "detection_rate", t.detected, t.bits, resend ? majority_wrong_guess(l) * (1.0 - std::pow(2.0, -l)) : 0.0,
            cfg.z));
    } else {
        const double p_in = cf.all_inconclusive(l);
        r.metrics.push_back(Metric::proportion("per_bit_success", t.correct, t.bits, 1.0 - p_in, cfg.z));
        r.metrics.push_back(
            Metric::proportion("whole_bid_success", t.bids_correct, t.bids, cf.usd_whole_bid(l, cfg.m), cfg.z));
        r.metrics.push_back(Metric::proportion("inconclusive_rate", t.unresolved, t.bits, p_in, cfg.z));
        r.metrics.push_back(Metric::value("conclusive_wrong_count", static_cast<double>(t.conclusive_wrong), 0.0, 0.0));
        r.metrics.push_back(Metric::proportion(
            "detection_rate", t.detected, t.bits, resend ? p_in * 0.5 * (1.0 - std::pow(2.0, -l)) : 0.0, cfg.z));
        if (resend) {
            r.metrics.push_back(Metric::proportion("detection_given_conclusive", t.resolved_detected,
                                                   t.bits - t.unresolved, 0.0, cfg.z));
        }
    }
    return r;
}

void require_single_copy(const AttackConfig& cfg) {
    if (cfg.l != 1) {
        throw std::invalid_argument("the semi-honest attacks use a single copy (l = 1)");
    }
}

} // namespace

AttackReport attack_semi_honest_projective(const AttackConfig& cfg) {
    require_single_copy(cfg);
    return copy_attack(cfg, "semi_honest_projective", CollusionMethod::majority, false, false);
}

AttackReport attack_semi_honest_usd(const AttackConfig& cfg) {
    require_single_copy(cfg);
    return copy_attack(cfg, "semi_honest_usd", CollusionMethod::usd, false, false);
}

AttackReport attack_multicopy_majority(const AttackConfig& cfg) {
    return copy_attack(cfg, "multicopy_majority", CollusionMethod::majority, false, true);
}

AttackReport attack_multicopy_usd(const AttackConfig& cfg) {
    return copy_attack(cfg, "multicopy_usd", CollusionMethod::usd, false, true);
}

AttackReport attack_collusion(const AttackConfig& cfg) {
    return copy_attack(cfg, "collusion_" + std::string(to_string(cfg.collusion)), cfg.collusion, true, true);
}

// ---------------------------------------------------------------------------
// Zhang-2 basis split

namespace {

constexpr std::array<const char*, 4> kOutcomeNames{"0", "1", "+", "-"};

std::string bb84_short(StateLabel label) {
    switch (label) {
    case StateLabel::Z0: return "0";
    case StateLabel::Z1: return "1";
    case StateLabel::XPlus: return "+";
    case StateLabel::XMinus: return "-";
    default: throw std::invalid_argument("not a BB84 label");
    }
}

struct SplitTables {
    /// Born probabilities, outcome order 0, 1, +, - (each basis normalized).
    std::array<std::array<double, 4>, 4> probs{};
    std::array<StateLabel, 4> label{};
    /// overlap[t][g] = |<t|g>|^2.
    std::array<std::array<double, 4>, 4> overlap{};

    explicit SplitTables(StateLabel q_pub) {
        const StateVector q = prepare_named(q_pub);
        const std::array<int, 1> target{0};
        std::array<StateVector, 4> states{q, q, q, q};
        for (int b = 0; b < 4; ++b) {
            const auto i = static_cast<std::size_t>(b);
            states[i] = zhang2_encode(q, b);
            const Probs z = outcome_probabilities(states[i], z_basis(), target);
            const Probs x = outcome_probabilities(states[i], x_basis(), target);
            probs[i] = {z[0], z[1], x[0], x[1]};
            bool found = false;
            for (StateLabel s : {StateLabel::Z0, StateLabel::Z1, StateLabel::XPlus, StateLabel::XMinus}) {
                if (states_equal_up_to_phase(states[i], prepare_named(s), 1e-9)) {
                    label[i] = s;
                    found = true;
                }
            }
            if (!found) {
                throw std::invalid_argument("q_pub must be a BB84 state");
            }
        }
        for (std::size_t t = 0; t < 4; ++t) {
            for (std::size_t g = 0; g < 4; ++g) {
                overlap[t][g] = std::norm(inner(states[t], states[g]));
            }
        }
    }
};

struct SplitTally {
    std::uint64_t blocks = 0;
    std::uint64_t correct = 0;
    std::uint64_t detected = 0;
    std::uint64_t bids = 0;
    std::uint64_t bids_correct = 0;
    /// outcomes[true block][outcome].
    std::array<std::array<std::uint64_t, 4>, 4> outcomes{};
    std::array<std::uint64_t, 4> samples{};

    SplitTally& operator+=(const SplitTally& o) {
        blocks += o.blocks;
        correct += o.correct;
        detected += o.detected;
        bids += o.bids;
        bids_correct += o.bids_correct;
        for (std::size_t i = 0; i < 4; ++i) {
            samples[i] += o.samples[i];
            for (std::size_t j = 0; j < 4; ++j) {
                outcomes[i][j] += o.outcomes[i][j];
            }
        }
        return *this;
    }
};

double likelihood(const std::array<double, 4>& p, const std::array<int, 4>& counts) {
    double value = 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (counts[k] == 0) {
            continue;
        }
        if (p[k] < 1e-12) {
            return 0.0;
        }
        value *= std::pow(p[k], counts[k]);
    }
    return value;
}

} // namespace

AttackReport attack_zhang2_basis_split(const AttackConfig& cfg) {
    cfg.validate();
    if (cfg.l < 2 || cfg.l % 2 != 0) {
        throw std::invalid_argument("the basis-split attack needs an even number of copies");
    }
    const SplitTables tab(cfg.q_pub);
    const int half = cfg.l / 2;
    const int blocks = (cfg.m + 1) / 2;
    const SplitTally t = run_trials<SplitTally>(cfg.trials, cfg.seed, [&](std::uint64_t, Rng& rng, SplitTally& tally) {
        std::vector<int> code;
        if (cfg.fixed_state) {
            code.assign(static_cast<std::size_t>(blocks), *cfg.fixed_state);
        } else {
            code = draw_bid(cfg, 1, rng).two_bit_blocks();
        }
        bool all_correct = true;
        for (int block : code) {
            const auto b = static_cast<std::size_t>(block);
            const std::array<double, 4>& p = tab.probs[b];
            std::array<int, 4> counts{};
            for (int k = 0; k < half; ++k) {
                const std::array<double, 2> z{p[0], p[1]};
                const std::array<double, 2> x{p[2], p[3]};
                ++counts[sample_index(z, rng)];
                ++counts[2 + sample_index(x, rng)];
            }
            for (std::size_t o = 0; o < 4; ++o) {
                tally.outcomes[b][o] += static_cast<std::uint64_t>(counts[o]);
            }
            tally.samples[b] += static_cast<std::uint64_t>(cfg.l);

            std::array<double, 4> like{};
            double best = 0.0;
            for (std::size_t c = 0; c < 4; ++c) {
                like[c] = likelihood(tab.probs[c], counts);
                best = std::max(best, like[c]);
            }
            std::vector<std::size_t> ties;
            for (std::size_t c = 0; c < 4; ++c) {
                if (like[c] >= best * (1.0 - 1e-9)) {
                    ties.push_back(c);
                }
            }
            const std::size_t guess = ties.size() == 1 ? ties[0] : ties[rng.below(ties.size())];
            const bool correct = guess == b;
            ++tally.blocks;
            tally.correct += correct ? 1 : 0;
            all_correct = all_correct && correct;
            const double mismatch = 1.0 - tab.overlap[b][guess];
            const std::array<double, 2> check{1.0 - mismatch, mismatch};
            tally.detected += sample_index(check, rng) == 1 ? 1 : 0;
        }
        ++tally.bids;
        tally.bids_correct += all_correct ? 1 : 0;
    });

    const double fail = std::pow(2.0, -half);
    AttackReport r;
    r.attack = "zhang2_basis_split";
    r.metrics.push_back(Metric::proportion("block_success", t.correct, t.blocks, 1.0 - fail, cfg.z));
    r.metrics.push_back(
        Metric::proportion("whole_bid_success", t.bids_correct, t.bids, std::pow(1.0 - fail, blocks), cfg.z));
    r.metrics.push_back(Metric::proportion("detection_rate", t.detected, t.blocks, fail / 2.0, cfg.z));
    for (std::size_t b = 0; b < 4; ++b) {
        if (t.samples[b] == 0) {
            continue;
        }
        for (std::size_t o = 0; o < 4; ++o) {
            r.metrics.push_back(Metric::proportion(
                "dist[" + bb84_short(tab.label[b]) + "][" + kOutcomeNames[o] + "]", t.outcomes[b][o], t.samples[b],
                tab.probs[b][o] / 2.0, cfg.z));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Attacks on the semi-quantum bid transfer

namespace {

SessionConfig transfer_config(const AttackConfig& cfg, bool defense) {
    SessionConfig sc;
    sc.num_parties = cfg.parties();
    sc.bid_length = cfg.m;
    sc.delta = cfg.delta;
    sc.error_threshold = cfg.threshold;
    sc.seed = cfg.seed;
    sc.permutation_defense = defense;
    sc.validate();
    return sc;
}

struct TransferTally {
    std::uint64_t checks = 0;
    std::uint64_t errors = 0;
    std::uint64_t diagonal_checks = 0;
    std::uint64_t diagonal_errors = 0;
    std::uint64_t aborted = 0;
    std::uint64_t sessions = 0;
    std::uint64_t bits = 0;
    std::uint64_t eve_correct = 0;
    std::uint64_t decoded_wrong = 0;
    /// table[bit][readout].
    std::array<std::array<std::uint64_t, 2>, 2> table{};
    double min_purity = 1.0;

    TransferTally& operator+=(const TransferTally& o) {
        checks += o.checks;
        errors += o.errors;
        diagonal_checks += o.diagonal_checks;
        diagonal_errors += o.diagonal_errors;
        aborted += o.aborted;
        sessions += o.sessions;
        bits += o.bits;
        eve_correct += o.eve_correct;
        decoded_wrong += o.decoded_wrong;
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                table[i][j] += o.table[i][j];
            }
        }
        min_purity = std::min(min_purity, o.min_purity);
        return *this;
    }
};

/// Plug-in estimate in bits.
double mutual_information(const std::array<std::array<std::uint64_t, 2>, 2>& table) {
    double n = 0.0;
    for (const auto& row : table) {
        for (std::uint64_t c : row) {
            n += static_cast<double>(c);
        }
    }
    if (n == 0.0) {
        return 0.0;
    }
    double mi = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const double pij = static_cast<double>(table[i][j]) / n;
            if (pij == 0.0) {
                continue;
            }
            const double pi = static_cast<double>(table[i][0] + table[i][1]) / n;
            const double pj = static_cast<double>(table[0][j] + table[1][j]) / n;
            mi += pij * std::log2(pij / (pi * pj));
        }
    }
    return std::max(0.0, mi);
}

/// One SP3-SP6 transfer for bidder 1 under `adversary`; returns Alice's decoding.
BidString transfer_trial(const SessionConfig& sc, const AttackConfig& cfg, Adversary& adversary, Rng& rng,
                         const BidString& bid, TransferTally& tally) {
    SessionContext ctx(sc, &adversary, rng.child(1));
    BidTransfer transfer = run_bid_transfer(ctx, 1, bid);
    tally.checks += transfer.check.checks;
    tally.errors += transfer.check.errors;
    tally.diagonal_checks += transfer.check.diagonal_checks;
    tally.diagonal_errors += transfer.check.diagonal_errors;
    tally.aborted += transfer.check.passed ? 0 : 1;
    ++tally.sessions;
    const BidString decoded = decode_transfer(ctx, transfer, bid);
    for (int t = 0; t < cfg.m; ++t) {
        tally.decoded_wrong += decoded.bit(t) != bid.bit(t) ? 1 : 0;
    }
    tally.bits += static_cast<std::uint64_t>(cfg.m);
    return decoded;
}

} // namespace

AttackReport attack_cnot(CnotMode mode, const AttackConfig& cfg) {
    cfg.validate();
    if (mode == CnotMode::both_ways && cfg.defense) {
        throw std::invalid_argument("the both-ways CNOT attack assumes the permutation defense is off");
    }
    const SessionConfig sc = transfer_config(cfg, cfg.defense);
    const TransferTally t =
        run_trials<TransferTally>(cfg.trials, cfg.seed, [&](std::uint64_t, Rng& rng, TransferTally& tally) {
            CnotAdversary eve(mode);
            const BidString bid = draw_bid(cfg, 1, rng);
            transfer_trial(sc, cfg, eve, rng, bid, tally);
            const std::vector<int>& readout = eve.last_readout();
            for (std::size_t k = 0; k < readout.size(); ++k) {
                const int bit = bid.bit(static_cast<int>(k));
                ++tally.table[static_cast<std::size_t>(bit)][static_cast<std::size_t>(readout[k])];
                tally.eve_correct += readout[k] == bit ? 1 : 0;
            }
            tally.min_purity = std::min(tally.min_purity, eve.min_purity());
        });

    const bool both = mode == CnotMode::both_ways;
    const std::size_t ctrl = sc.qubits_per_bidder() - static_cast<std::size_t>(cfg.m);
    AttackReport r;
    r.attack = "cnot_" + std::string(to_string(mode));
    r.metrics.push_back(Metric::proportion("per_bit_success", t.eve_correct, t.bits, both ? 0.5 : 1.0, cfg.z));
    r.metrics.push_back(Metric::proportion("detection_rate", t.errors, t.checks, both ? 0.0 : 0.25, cfg.z));
    r.metrics.push_back(
        Metric::proportion("diagonal_detection", t.diagonal_errors, t.diagonal_checks, both ? 0.0 : 0.5, cfg.z));
    r.metrics.push_back(Metric::proportion("computational_detection", t.errors - t.diagonal_errors,
                                           t.checks - t.diagonal_checks, 0.0, cfg.z));
    r.metrics.push_back(Metric::proportion("session_abort_rate", t.aborted, t.sessions,
                                           both ? 0.0 : decoy_abort_probability(ctrl, 0.25, cfg.threshold, 1), cfg.z));
    r.metrics.push_back(Metric::proportion("decoded_bit_error", t.decoded_wrong, t.bits, 0.0, cfg.z));
    r.metrics.push_back(Metric::value("mutual_information_bits", mutual_information(t.table), both ? 0.0 : 1.0, 1e-3));
    if (both) {
        r.metrics.push_back(Metric::value("min_ancilla_purity", t.min_purity, 1.0, 1e-12));
    }
    return r;
}

AttackReport attack_intercept_resend_swap(bool defense, const AttackConfig& cfg) {
    cfg.validate();
    const SessionConfig sc = transfer_config(cfg, defense);
    const TransferTally t =
        run_trials<TransferTally>(cfg.trials, cfg.seed, [&](std::uint64_t, Rng& rng, TransferTally& tally) {
            SwapAdversary eve;
            const BidString bid = draw_bid(cfg, 1, rng);
            transfer_trial(sc, cfg, eve, rng, bid, tally);
            const std::vector<int>& got = eve.recovered().at(1);
            for (std::size_t k = 0; k < got.size(); ++k) {
                tally.eve_correct += got[k] == bid.bit(static_cast<int>(k)) ? 1 : 0;
            }
        });

    AttackReport r;
    r.attack = std::string("swap_defense_") + (defense ? "on" : "off");
    r.metrics.push_back(Metric::proportion("per_bit_success", t.eve_correct, t.bits, 1.0, cfg.z));
    r.metrics.push_back(Metric::proportion("bid_integrity_failure", t.decoded_wrong, t.bits, 0.5, cfg.z));
    r.metrics.push_back(Metric::proportion("detection_rate", t.errors, t.checks,
                                           defense ? swap_check_detection(sc.qubits_per_bidder()) : 0.0, cfg.z));
    if (!defense) {
        r.metrics.push_back(Metric::proportion("session_abort_rate", t.aborted, t.sessions, 0.0, cfg.z));
    }
    return r;
}

// ---------------------------------------------------------------------------
// False permutation and disturbance

namespace {

struct RunTally {
    std::uint64_t runs = 0;
    std::uint64_t success = 0;
    std::uint64_t unfair = 0;
    std::uint64_t aborted = 0;
    std::uint64_t altered = 0;
    std::uint64_t altered_unfair = 0;
    std::uint64_t unaltered_fair = 0;
    std::uint64_t decoded_runs = 0;
    std::uint64_t bits = 0;
    std::uint64_t bits_changed = 0;
    std::uint64_t complemented = 0;

    RunTally& operator+=(const RunTally& o) {
        runs += o.runs;
        success += o.success;
        unfair += o.unfair;
        aborted += o.aborted;
        altered += o.altered;
        altered_unfair += o.altered_unfair;
        unaltered_fair += o.unaltered_fair;
        decoded_runs += o.decoded_runs;
        bits += o.bits;
        bits_changed += o.bits_changed;
        complemented += o.complemented;
        return *this;
    }
};

LegacyConfig legacy_config(const AttackConfig& cfg) {
    LegacyConfig lc;
    lc.decoys.count = cfg.decoys;
    lc.error_threshold = cfg.threshold;
    lc.remedy_mode = cfg.remedy;
    return lc;
}

} // namespace

AttackReport attack_false_permutation(FalsePermutationTarget target, const AttackConfig& cfg) {
    cfg.validate();
    const int bidders = cfg.parties() - 1;
    AttackReport r;
    r.attack = "false_permutation_" + std::string(to_string(target));
    if (target == FalsePermutationTarget::liu) {
        const LegacyConfig lc = legacy_config(cfg);
        const RunTally t = run_trials<RunTally>(cfg.trials, cfg.seed, [&](std::uint64_t, Rng& rng, RunTally& tally) {
            std::vector<BidString> bids{draw_bid(cfg, 1, rng)};
            for (PartyId p = 2; p <= bidders; ++p) {
                bids.push_back(BidString::from_value(p, 0, cfg.m));
            }
            LiuFalsePermutationAdversary eve(1);
            const LegacyRun run = run_liu(bids, lc, &eve, rng);
            ++tally.runs;
            const bool altered = run.outcome.winning_bid && !(*run.outcome.winning_bid == bids[0]);
            tally.success += (run.outcome.verdict == Verdict::fair && altered) ? 1 : 0;
            tally.unfair += run.outcome.verdict == Verdict::unfair ? 1 : 0;
        });
        r.metrics.push_back(Metric::proportion("whole_bid_success", t.success, t.runs,
                                               liu_false_permutation_success(cfg.m), cfg.z));
        r.metrics.push_back(Metric::proportion("detection_rate", t.unfair, t.runs, 0.0, cfg.z));
        return r;
    }

    SessionConfig sc;
    sc.num_parties = cfg.parties();
    sc.bid_length = cfg.m;
    sc.delta = cfg.delta;
    sc.error_threshold = cfg.threshold;
    sc.validate();
    const RunTally t = run_trials<RunTally>(cfg.trials, cfg.seed, [&](std::uint64_t, Rng& rng, RunTally& tally) {
        std::vector<BidString> bids;
        for (PartyId p = 1; p <= bidders; ++p) {
            bids.push_back(draw_bid(cfg, p, rng));
        }
        FalseEncOrderAdversary eve(1);
        const SqsbaRun run = run_sqsba(sc, bids, &eve, rng);
        ++tally.runs;
        if (!run.outcome.winner) {
            ++tally.aborted;
            return;
        }
        const BidString& committed = bids[static_cast<std::size_t>(*run.outcome.winner - 1)];
        const bool altered = !(*run.outcome.winning_bid == committed);
        const bool fair = run.outcome.verdict == Verdict::fair;
        tally.altered += altered ? 1 : 0;
        tally.altered_unfair += (altered && !fair) ? 1 : 0;
        tally.unaltered_fair += (!altered && fair) ? 1 : 0;
        tally.success += (altered && fair) ? 1 : 0;
    });
    r.metrics.push_back(Metric::proportion("whole_bid_success", t.success, t.runs, 0.0, cfg.z));
    r.metrics.push_back(Metric::proportion("unfair_given_altered", t.altered_unfair, t.altered, 1.0, cfg.z));
    r.metrics.push_back(
        Metric::proportion("fair_given_unaltered", t.unaltered_fair, t.runs - t.aborted - t.altered, 1.0, cfg.z));
    r.metrics.push_back(Metric::proportion("session_abort_rate", t.aborted, t.runs, 0.0, cfg.z));
    return r;
}

AttackReport attack_disturbance(const AttackConfig& cfg) {
    cfg.validate();
    const int bidders = cfg.parties() - 1;
    const LegacyConfig lc = legacy_config(cfg);
    const RunTally t = run_trials<RunTally>(cfg.trials, cfg.seed, [&](std::uint64_t, Rng& rng, RunTally& tally) {
        std::vector<BidString> bids;
        for (PartyId p = 1; p <= bidders; ++p) {
            bids.push_back(draw_bid(cfg, p, rng));
        }
        LiuDisturbanceAdversary eve(cfg.disturbance);
        const LegacyRun run = run_liu(bids, lc, &eve, rng);
        ++tally.runs;
        if (run.outcome.verdict == Verdict::aborted_eavesdropping) {
            ++tally.aborted;
            return;
        }
        ++tally.decoded_runs;
        for (std::size_t i = 0; i < bids.size(); ++i) {
            bool complement = true;
            for (int k = 0; k < cfg.m; ++k) {
                const bool changed = run.decoded[i].bit(k) != bids[i].bit(k);
                tally.bits_changed += changed ? 1 : 0;
                complement = complement && changed;
            }
            tally.bits += static_cast<std::uint64_t>(cfg.m);
            tally.complemented += complement ? 1 : 0;
        }
    });

    const bool flip = cfg.disturbance == DisturbanceMode::flip;
    const std::size_t return_decoys = cfg.remedy ? cfg.decoys : 0;
    const double detection =
        decoy_abort_probability(return_decoys, flip ? 1.0 : 0.5, cfg.threshold, bidders);
    AttackReport r;
    r.attack = "disturbance_" + std::string(to_string(cfg.disturbance)) + (cfg.remedy ? "_remedy" : "");
    r.metrics.push_back(Metric::proportion("detection_rate", t.aborted, t.runs, detection, cfg.z));
    if (t.decoded_runs > 0) {
        r.metrics.push_back(Metric::proportion("per_bit_alteration", t.bits_changed, t.bits, flip ? 1.0 : 0.5, cfg.z));
        const double complement = flip ? 1.0 : std::pow(0.5, cfg.m);
        r.metrics.push_back(Metric::proportion("complement_rate", t.complemented,
                                               t.decoded_runs * static_cast<std::uint64_t>(bidders), complement, cfg.z));
    }
    return r;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& attack_names() {
    static const std::vector<std::string> names{
        "projective", "usd",   "multicopy_majority", "multicopy_usd",     "collusion",
        "basis_split", "cnot", "swap",               "false_permutation", "disturbance"};
    return names;
}

AttackReport run_attack(std::string_view name, const AttackConfig& cfg) {
    if (name == "projective") {
        return cfg.l == 1 ? attack_semi_honest_projective(cfg) : attack_multicopy_majority(cfg);
    }
    if (name == "usd") {
        return cfg.l == 1 ? attack_semi_honest_usd(cfg) : attack_multicopy_usd(cfg);
    }
    if (name == "multicopy_majority" || name == "majority") {
        return attack_multicopy_majority(cfg);
    }
    if (name == "multicopy_usd") {
        return attack_multicopy_usd(cfg);
    }
    if (name == "collusion") {
        return attack_collusion(cfg);
    }
    if (name == "basis_split") {
        return attack_zhang2_basis_split(cfg);
    }
    if (name == "cnot") {
        return attack_cnot(cfg.cnot_mode, cfg);
    }
    if (name == "swap") {
        return attack_intercept_resend_swap(cfg.defense, cfg);
    }
    if (name == "false_permutation") {
        return attack_false_permutation(cfg.against, cfg);
    }
    if (name == "disturbance") {
        return attack_disturbance(cfg);
    }
    throw std::invalid_argument("unknown attack: " + std::string(name));
}

} // namespace qsba
