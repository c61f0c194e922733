#include "qsba/legacy.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace qsba {

std::string_view to_string(LegacyVariant variant) {
    switch (variant) {
    case LegacyVariant::liu: return "liu";
    case LegacyVariant::zhang1: return "zhang1";
    case LegacyVariant::zhang2: return "zhang2";
    }
    return "?";
}

LegacyVariant parse_legacy_variant(std::string_view name) {
    if (name == "liu") {
        return LegacyVariant::liu;
    }
    if (name == "zhang1") {
        return LegacyVariant::zhang1;
    }
    if (name == "zhang2") {
        return LegacyVariant::zhang2;
    }
    throw std::invalid_argument("unknown legacy protocol: " + std::string(name));
}

DecoyKey insert_decoys(QubitSequence& sequence, const DecoyPolicy& policy, Rng& rng) {
    const std::size_t total = sequence.size() + policy.count;
    std::vector<std::size_t> slots(total);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    for (std::size_t i = 0; i < policy.count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
        std::swap(slots[i], slots[j]);
    }
    DecoyKey key;
    key.positions.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(policy.count));
    std::sort(key.positions.begin(), key.positions.end());
    for (std::size_t pos : key.positions) {
        const StateLabel label = bb84_random(rng);
        key.labels.push_back(label);
        sequence.insert(pos, prepare_named(label));
    }
    return key;
}

void remove_decoys(QubitSequence& sequence, const DecoyKey& key) {
    for (auto it = key.positions.rbegin(); it != key.positions.rend(); ++it) {
        sequence.erase(*it);
    }
}

DecoyCheck check_decoys(QubitSequence& received, const DecoyKey& key, Rng& rng) {
    DecoyCheck check;
    for (std::size_t k = 0; k < key.positions.size(); ++k) {
        const std::size_t outcome = received.measure(key.positions[k], basis_of(key.labels[k]), rng);
        ++check.checked;
        if (static_cast<int>(outcome) != bb84_bit(key.labels[k])) {
            ++check.errors;
        }
    }
    return check;
}

StateVector liu_encode(const StateVector& prepared, int bit) {
    if (prepared.num_qubits() != 1) {
        throw std::invalid_argument("liu_encode expects a single qubit");
    }
    return bit == 0 ? prepared : apply_unitary(prepared, UnitaryOp::i_sigma_y(), 0);
}

int liu_decode(StateLabel prepared, const StateVector& returned, Rng& rng) {
    const MeasRecord rec = measure_projective(returned, basis_of(prepared), 0, rng);
    return static_cast<int>(rec.outcome_index) == bb84_bit(prepared) ? 0 : 1;
}

StateVector zhang1_encode(int bit) { return prepare_named(bit == 0 ? StateLabel::Z0 : StateLabel::XPlus); }

double zhang2_theta(int block) {
    if (block < 0 || block > 3) {
        throw std::invalid_argument("two-bit block out of range");
    }
    return block * std::numbers::pi / 4.0;
}

StateVector zhang2_encode(const StateVector& q, int block) { return apply_unitary(q, rotation_u(zhang2_theta(block)), 0); }

StateLabel liu_bell_label(int block) {
    switch (block) {
    case 0: return StateLabel::PsiPlus;
    case 1: return StateLabel::PsiMinus;
    case 2: return StateLabel::PhiPlus;
    case 3: return StateLabel::PhiMinus;
    default: throw std::invalid_argument("two-bit block out of range");
    }
}

namespace {

/// Lifts a permutation of Bell pairs to the qubits of the pairs.
PermutationOp pairwise(const PermutationOp& pairs) {
    std::vector<std::size_t> mapping(2 * pairs.size());
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        mapping[2 * q] = 2 * pairs(q);
        mapping[2 * q + 1] = 2 * pairs(q) + 1;
    }
    return PermutationOp(std::move(mapping));
}

std::string mapping_text(const PermutationOp& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += (i ? "," : "") + std::to_string(p(i));
    }
    return s + "]";
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& taken) {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (k < taken.size() && taken[k] == i) {
            ++k;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

struct PostConfirm {
    QubitSequence sequence;
    /// Liu only: the sender's pair permutation.
    PermutationOp permutation;
};

class LegacySession {
public:
    LegacySession(LegacyVariant variant, std::span<const BidString> bids, const LegacyConfig& config,
                  Adversary* adversary, Rng& rng)
        : variant_(variant), config_(config), adversary_(adversary), rng_(rng), adversary_rng_(rng.child(0xad)) {
        if (bids.size() < 2) {
            throw std::invalid_argument("at least two bidders are required");
        }
        if (!(config.error_threshold >= 0.0 && config.error_threshold <= 1.0)) {
            throw std::invalid_argument("error threshold must lie in [0, 1]");
        }
        m_ = bids.front().size();
        for (std::size_t i = 0; i < bids.size(); ++i) {
            if (bids[i].size() != m_) {
                throw std::invalid_argument("all bids must have the same length");
            }
            bids_.push_back(bids[i].with_owner(static_cast<PartyId>(i + 1)));
        }
        run_.transcript = Transcript(config.record_detail);
    }

    void set_q_pub(std::vector<StateVector> q_pub) { q_pub_ = std::move(q_pub); }

    LegacyRun execute();

private:
    int bidders() const { return static_cast<int>(bids_.size()); }
    std::size_t blocks() const { return static_cast<std::size_t>((m_ + 1) / 2); }
    Transcript& log() { return run_.transcript; }

    void note(PartyId actor, ActionKind kind, std::string payload) {
        log().record(party_name(actor), kind, std::move(payload));
    }

    /// Records the check and returns false when it fails.
    bool checked(PartyId checker, const DecoyCheck& check, std::string_view stage) {
        observed_error_ = std::max(observed_error_, check.error_rate());
        note(checker, ActionKind::measure,
             std::string(stage) + " decoy check: " + std::to_string(check.errors) + "/" +
                 std::to_string(check.checked) + " errors");
        if (check.error_rate() > config_.error_threshold) {
            run_.outcome.verdict = Verdict::aborted_eavesdropping;
            run_.outcome.abort_stage = std::string(stage);
            run_.outcome.error_rate_observed = observed_error_;
            note(kAuctioneer, ActionKind::announce, std::string(stage) + ": error rate above threshold, protocol discarded");
            return false;
        }
        return true;
    }

    void audit_basis_measurements(PartyId party, std::string_view stage, const std::vector<StateLabel>& labels) {
        for (StateLabel label : labels) {
            run_.audit.record(party, stage, is_diagonal(label) ? QuantumAction::other : QuantumAction::measure_z);
        }
    }

    bool protected_transfer(Link link, QubitSequence& seq, std::string payload, bool with_decoys, PartyId checker,
                            std::string_view stage);

    bool distribute_and_encode();
    bool post_confirmation_transfers();
    bool return_and_decode();
    void announce_and_verify();

    PostConfirm build_post_confirm(PartyId sender);
    bool verify(PartyId verifier, PartyId winner, const BidString& announced);

    LegacyVariant variant_;
    LegacyConfig config_;
    Adversary* adversary_;
    Rng& rng_;
    Rng adversary_rng_;
    int m_ = 0;
    std::vector<BidString> bids_;
    std::vector<StateVector> q_pub_;
    std::vector<std::vector<StateLabel>> prep_labels_;
    std::vector<QubitSequence> carriers_;
    std::map<std::pair<PartyId, PartyId>, PostConfirm> post_;
    double observed_error_ = 0.0;
    LegacyRun run_;
};

bool LegacySession::protected_transfer(Link link, QubitSequence& seq, std::string payload, bool with_decoys,
                                       PartyId checker, std::string_view stage) {
    DecoyKey key;
    if (with_decoys) {
        key = insert_decoys(seq, config_.decoys, rng_);
        link.check_positions = key.positions;
        link.data_positions = complement(seq.size(), key.positions);
        payload += " with " + std::to_string(key.positions.size()) + " decoys";
    }
    transmit(log(), adversary_, link, seq, std::move(payload), adversary_rng_);
    if (!with_decoys) {
        return true;
    }
    if (link.from != kAuctioneer) {
        // Decoys are prepared by the sender.
        for (StateLabel label : key.labels) {
            run_.audit.record(link.from, stage,
                              is_diagonal(label) ? QuantumAction::other : QuantumAction::prepare_z);
        }
    }
    if (checker != kAuctioneer) {
        audit_basis_measurements(checker, stage, key.labels);
    }
    const DecoyCheck check = check_decoys(seq, key, rng_);
    if (!checked(checker, check, stage)) {
        return false;
    }
    remove_decoys(seq, key);
    return true;
}

bool LegacySession::distribute_and_encode() {
    for (int i = 1; i <= bidders(); ++i) {
        std::vector<StateLabel> labels(static_cast<std::size_t>(m_));
        QubitSequence seq;
        for (StateLabel& label : labels) {
            label = bb84_random(rng_);
            seq.append(prepare_named(label));
        }
        note(kAuctioneer, ActionKind::prepare, "Step 2: P_" + std::to_string(i) + " of " + std::to_string(m_) +
                                                   " random BB84 qubits");
        Link link{Stage::distribute, kAuctioneer, i, {}, {}, {}};
        link.data_positions = complement(seq.size(), {});
        if (!protected_transfer(link, seq, "Step 2: P_" + std::to_string(i) + "'", true, i, "Step 3")) {
            return false;
        }
        const BidString& bid = bids_[static_cast<std::size_t>(i - 1)];
        for (int p = 0; p < m_; ++p) {
            if (bid.bit(p) == 1) {
                seq.apply(static_cast<std::size_t>(p), UnitaryOp::i_sigma_y());
                run_.audit.record(i, "Step 4", QuantumAction::other);
            } else {
                run_.audit.record(i, "Step 4", QuantumAction::reflect);
            }
            if (log().detailed()) {
                note(i, ActionKind::operate, "Step 4: qubit " + std::to_string(p) + (bid.bit(p) ? " i*sigma_y" : " I"));
            }
        }
        note(i, ActionKind::operate, "Step 4: bid encoded into P_" + std::to_string(i) + "''");
        prep_labels_.push_back(std::move(labels));
        carriers_.push_back(std::move(seq));
    }
    return true;
}

PostConfirm LegacySession::build_post_confirm(PartyId sender) {
    const BidString& bid = bids_[static_cast<std::size_t>(sender - 1)];
    PostConfirm out;
    switch (variant_) {
    case LegacyVariant::liu: {
        const std::vector<int> code = bid.two_bit_blocks();
        for (int block : code) {
            out.sequence.append(prepare_named(liu_bell_label(block)));
            run_.audit.record(sender, "Step 5", QuantumAction::other);
        }
        out.permutation = PermutationOp::random(code.size(), rng_);
        out.sequence.permute(pairwise(out.permutation));
        run_.audit.record(sender, "Step 5", QuantumAction::reflect, 2 * code.size());
        break;
    }
    case LegacyVariant::zhang1:
        for (int p = 0; p < m_; ++p) {
            out.sequence.append(zhang1_encode(bid.bit(p)));
            run_.audit.record(sender, "Step 5-Z1", bid.bit(p) == 0 ? QuantumAction::prepare_z : QuantumAction::other);
        }
        break;
    case LegacyVariant::zhang2: {
        const std::vector<int> code = bid.two_bit_blocks();
        for (std::size_t q = 0; q < code.size(); ++q) {
            out.sequence.append(zhang2_encode(q_pub_[q], code[q]));
            run_.audit.record(sender, "Step 5-Z2", QuantumAction::other);
        }
        break;
    }
    }
    return out;
}

bool LegacySession::post_confirmation_transfers() {
    const bool decoys = variant_ == LegacyVariant::liu || config_.remedy_mode;
    const std::string stage = variant_ == LegacyVariant::liu      ? "Step 5"
                              : variant_ == LegacyVariant::zhang1 ? "Step 5-Z1"
                                                                  : "Step 5-Z2";
    for (int i = 1; i <= bidders(); ++i) {
        for (int j = 1; j <= bidders(); ++j) {
            if (i == j) {
                continue;
            }
            PostConfirm pc = build_post_confirm(i);
            note(i, ActionKind::prepare, stage + ": R_" + std::to_string(i) + std::to_string(j) + " prepared");
            Link link{Stage::post_confirm, i, j, {}, complement(pc.sequence.size(), {}), {}};
            if (!protected_transfer(link, pc.sequence, stage + ": R_" + std::to_string(i) + std::to_string(j), decoys,
                                    j, stage)) {
                return false;
            }
            post_.emplace(std::make_pair(i, j), std::move(pc));
        }
    }
    return true;
}

bool LegacySession::return_and_decode() {
    for (int i = 1; i <= bidders(); ++i) {
        QubitSequence& seq = carriers_[static_cast<std::size_t>(i - 1)];
        Link link{Stage::bid_return, i, kAuctioneer, {}, complement(seq.size(), {}), {}};
        if (!protected_transfer(link, seq, "Step 6: P_" + std::to_string(i) + "''", config_.remedy_mode, kAuctioneer,
                                "Step 6")) {
            run_.decoded.clear();
            return false;
        }
        const auto& labels = prep_labels_[static_cast<std::size_t>(i - 1)];
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(m_));
        for (std::size_t p = 0; p < bits.size(); ++p) {
            const std::size_t outcome = seq.measure(p, basis_of(labels[p]), rng_);
            bits[p] = static_cast<std::uint8_t>(static_cast<int>(outcome) == bb84_bit(labels[p]) ? 0 : 1);
        }
        note(kAuctioneer, ActionKind::measure, "Step 6: P_" + std::to_string(i) + "'' measured in preparation bases");
        run_.decoded.emplace_back(i, std::move(bits));
    }
    return true;
}

bool LegacySession::verify(PartyId verifier, PartyId winner, const BidString& announced) {
    PostConfirm& pc = post_.at({winner, verifier});
    QubitSequence& seq = pc.sequence;
    switch (variant_) {
    case LegacyVariant::liu: {
        PermutationOp disclosed = pc.permutation;
        if (adversary_ != nullptr) {
            disclosed = adversary_->announce_pair_permutation(winner, verifier, pc.permutation,
                                                             bids_[static_cast<std::size_t>(winner - 1)]);
        }
        note(winner, ActionKind::announce,
             "Step 7: permutation for Bob" + std::to_string(verifier) + " " + mapping_text(disclosed));
        if (disclosed.size() != blocks()) {
            return false;
        }
        seq.permute(pairwise(disclosed).inverse());
        std::vector<int> code(blocks());
        for (std::size_t q = 0; q < code.size(); ++q) {
            code[q] = static_cast<int>(seq.bell_measure(2 * q, 2 * q + 1, rng_));
        }
        run_.audit.record(verifier, "Step 7", QuantumAction::other, code.size());
        try {
            return BidString::from_two_bit_blocks(winner, code, m_) == announced;
        } catch (const std::invalid_argument&) {
            return false;
        }
    }
    case LegacyVariant::zhang1: {
        bool ok = true;
        for (int p = 0; p < m_; ++p) {
            const int b = announced.bit(p);
            const std::size_t outcome = seq.measure(static_cast<std::size_t>(p), b == 0 ? z_basis() : x_basis(), rng_);
            run_.audit.record(verifier, "Step 7-Z1", b == 0 ? QuantumAction::measure_z : QuantumAction::other);
            ok = ok && outcome == 0;
        }
        return ok;
    }
    case LegacyVariant::zhang2: {
        bool ok = true;
        const std::vector<int> code = announced.two_bit_blocks();
        for (std::size_t q = 0; q < code.size(); ++q) {
            seq.apply(q, rotation_u(zhang2_theta(code[q])).adjoint());
            const Complex a = q_pub_[q].amp(0);
            const Complex b = q_pub_[q].amp(1);
            Amplitudes same(2);
            same << a, b;
            Amplitudes other(2);
            other << -std::conj(b), std::conj(a);
            const ProjBasis check({same, other}, {"q", "q_perp"});
            ok = seq.measure(q, check, rng_) == 0 && ok;
            run_.audit.record(verifier, "Step 7-Z2", QuantumAction::other, 2);
        }
        return ok;
    }
    }
    return false;
}

void LegacySession::announce_and_verify() {
    const std::size_t w = select_winner(run_.decoded);
    const PartyId winner = static_cast<PartyId>(w + 1);
    BidString announced = run_.decoded[w];
    if (adversary_ != nullptr) {
        announced = adversary_->announce_winning_bid(winner, announced).with_owner(winner);
    }
    note(kAuctioneer, ActionKind::announce, "winner=" + party_name(winner) + " bid=" + announced.to_string());
    run_.outcome.winner = winner;
    run_.outcome.winning_bid = announced;

    bool fair = true;
    for (int j = 1; j <= bidders(); ++j) {
        if (j == winner) {
            continue;
        }
        const bool ok = verify(j, winner, announced);
        note(j, ActionKind::announce, std::string("post-confirmation ") + (ok ? "match" : "mismatch"));
        fair = fair && ok;
    }
    run_.outcome.verdict = fair ? Verdict::fair : Verdict::unfair;
    run_.outcome.error_rate_observed = observed_error_;
}

LegacyRun LegacySession::execute() {
    note(kAuctioneer, ActionKind::announce,
         std::string(to_string(variant_)) + ": " + std::to_string(bidders()) + " bidders, m=" + std::to_string(m_));
    if (variant_ != LegacyVariant::zhang1 && m_ % 2 == 1) {
        note(kAuctioneer, ActionKind::announce, "odd bid length: leading 0 pad bit for two-bit blocks");
    }
    if (variant_ == LegacyVariant::zhang2) {
        if (q_pub_.empty()) {
            for (std::size_t q = 0; q < blocks(); ++q) {
                q_pub_.push_back(prepare_named(bb84_random(rng_)));
            }
            note(kAuctioneer, ActionKind::announce, "Q_pub shared out-of-band");
        } else if (q_pub_.size() != blocks()) {
            throw std::invalid_argument("Q_pub needs one qubit per two-bit block");
        }
    }
    note(kAuctioneer, ActionKind::announce, "bidding phase");
    if (!distribute_and_encode()) {
        return std::move(run_);
    }
    note(kAuctioneer, ActionKind::announce, "post-confirmation phase: sequences exchanged");
    if (!post_confirmation_transfers()) {
        return std::move(run_);
    }
    if (!return_and_decode()) {
        return std::move(run_);
    }
    note(kAuctioneer, ActionKind::announce, "post-confirmation phase: verification");
    announce_and_verify();
    return std::move(run_);
}

} // namespace

LegacyRun run_liu(std::span<const BidString> bids, const LegacyConfig& config, Adversary* adversary, Rng& rng) {
    return LegacySession(LegacyVariant::liu, bids, config, adversary, rng).execute();
}

LegacyRun run_zhang1(std::span<const BidString> bids, const LegacyConfig& config, Adversary* adversary, Rng& rng) {
    return LegacySession(LegacyVariant::zhang1, bids, config, adversary, rng).execute();
}

LegacyRun run_zhang2(std::span<const BidString> bids, const std::optional<std::vector<StateVector>>& q_pub,
                     const LegacyConfig& config, Adversary* adversary, Rng& rng) {
    LegacySession session(LegacyVariant::zhang2, bids, config, adversary, rng);
    if (q_pub) {
        for (const StateVector& q : *q_pub) {
            if (q.num_qubits() != 1) {
                throw std::invalid_argument("Q_pub entries must be single qubits");
            }
        }
        session.set_q_pub(*q_pub);
    }
    return session.execute();
}

LegacyRun run_legacy(LegacyVariant variant, std::span<const BidString> bids, const LegacyConfig& config,
                     Adversary* adversary, Rng& rng) {
    switch (variant) {
    case LegacyVariant::liu: return run_liu(bids, config, adversary, rng);
    case LegacyVariant::zhang1: return run_zhang1(bids, config, adversary, rng);
    case LegacyVariant::zhang2: return run_zhang2(bids, std::nullopt, config, adversary, rng);
    }
    throw std::invalid_argument("unknown legacy protocol");
}

} // namespace qsba
