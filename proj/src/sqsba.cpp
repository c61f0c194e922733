#include "qsba/sqsba.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

namespace qsba {

Bytes32 sha256(std::span<const std::uint8_t> data) {
    Bytes32 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size()) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    return out;
}

std::string to_hex(const Bytes32& bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(2 * bytes.size());
    for (std::uint8_t b : bytes) {
        s.push_back(kDigits[b >> 4]);
        s.push_back(kDigits[b & 0xF]);
    }
    return s;
}

Bytes32 xor_bytes(const Bytes32& a, const Bytes32& b) {
    Bytes32 out{};
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = static_cast<std::uint8_t>(a[k] ^ b[k]);
    }
    return out;
}

int hamming_distance(const Bytes32& a, const Bytes32& b) {
    int d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        d += std::popcount(static_cast<unsigned>(a[k] ^ b[k]));
    }
    return d;
}

Bytes32 pad_bid(const BidString& bid) {
    Bytes32 out{};
    const std::uint64_t v = bid.value();
    for (int k = 0; k < 8; ++k) {
        out[31 - static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((v >> (8 * k)) & 0xFF);
    }
    return out;
}

Bytes32 bid_digest(const Bytes32& key, const BidString& bid) { return sha256(xor_bytes(key, pad_bid(bid))); }

std::size_t qubits_per_bidder(int m, double delta) {
    return static_cast<std::size_t>(std::ceil(4.0 * m * (1.0 + delta) - 1e-9));
}

void SessionConfig::validate() const {
    if (num_parties < 3) {
        throw std::invalid_argument("a session needs an auctioneer and at least two bidders");
    }
    if (bid_length < 1 || bid_length > 64) {
        throw std::invalid_argument("bid length must lie in [1, 64]");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("delta must be positive");
    }
    if (!(error_threshold >= 0.0 && error_threshold <= 1.0)) {
        throw std::invalid_argument("error threshold must lie in [0, 1]");
    }
    if (silent_after_commit && (*silent_after_commit < 1 || *silent_after_commit > bidders())) {
        throw std::invalid_argument("silent bidder id out of range");
    }
}

std::size_t SessionConfig::qubits_per_bidder() const { return qsba::qubits_per_bidder(bid_length, delta); }

void KeyRing::add(const KeyMaterial& key) {
    if (key.first == key.second) {
        throw std::invalid_argument("a key needs two distinct parties");
    }
    KeyMaterial k = key;
    if (k.first > k.second) {
        std::swap(k.first, k.second);
        std::swap(k.first_bits, k.second_bits);
    }
    keys_[{k.first, k.second}] = k;
}

bool KeyRing::has(PartyId a, PartyId b) const { return keys_.count({std::min(a, b), std::max(a, b)}) != 0; }

const KeyMaterial& KeyRing::pair(PartyId a, PartyId b) const {
    const auto it = keys_.find({std::min(a, b), std::max(a, b)});
    if (it == keys_.end()) {
        throw std::invalid_argument("no key shared by " + party_name(a) + " and " + party_name(b));
    }
    return it->second;
}

const Bytes32& KeyRing::held_by(PartyId holder, PartyId peer) const {
    const KeyMaterial& k = pair(holder, peer);
    return holder == k.first ? k.first_bits : k.second_bits;
}

SessionContext::SessionContext(const SessionConfig& cfg, Adversary* adv, Rng stream)
    : config(cfg), adversary(adv), rng(stream), adversary_rng(rng.child(0xad)), transcript(cfg.record_rounds) {}

int ClassicalBidder::measure_z(QubitSequence& qubits, std::size_t position, std::string_view stage, Rng& rng) {
    audit_->record(id_, stage, QuantumAction::measure_z);
    return static_cast<int>(qubits.measure(position, z_basis(), rng));
}

void ClassicalBidder::prepare_z(QubitSequence& qubits, std::size_t position, int bit, std::string_view stage,
                                Rng& rng) {
    audit_->record(id_, stage, QuantumAction::prepare_z);
    qubits.replace(position, StateVector::basis_state(1, bit == 0 ? 0 : 1), rng);
}

void ClassicalBidder::reflect(std::string_view stage, std::size_t count) {
    audit_->record(id_, stage, QuantumAction::reflect, count);
}

namespace {

void note(SessionContext& ctx, PartyId actor, ActionKind kind, std::string payload) {
    ctx.transcript.record(party_name(actor), kind, std::move(payload));
}

Bytes32 pack_bits(const std::vector<std::uint8_t>& bits) {
    Bytes32 out{};
    for (std::size_t t = 0; t < bits.size() && t < kKeyBits; ++t) {
        out[t / 8] = static_cast<std::uint8_t>(out[t / 8] | (bits[t] << (7 - t % 8)));
    }
    return out;
}

std::string pairs_text(const CtrlAnnouncement& a) {
    std::string s;
    for (const auto& [orig, ret] : a.pairs) {
        s += (s.empty() ? "" : ",") + std::to_string(orig) + "->" + std::to_string(ret);
    }
    return s;
}

std::string positions_text(std::span<const std::size_t> positions) {
    std::string s = "[";
    for (std::size_t k = 0; k < positions.size(); ++k) {
        s += (k ? "," : "") + std::to_string(positions[k]);
    }
    return s + "]";
}

} // namespace

KeyDistReport sp1_keydist(SessionContext& ctx, PartyId i, PartyId j, std::size_t key_bits) {
    if (key_bits == 0 || key_bits > kKeyBits) {
        throw std::invalid_argument("key length must lie in [1, 256]");
    }
    if (i == j) {
        throw std::invalid_argument("key distribution needs two distinct bidders");
    }
    ClassicalBidder bob_i(i, ctx.audit);
    ClassicalBidder bob_j(j, ctx.audit);
    const bool detail = ctx.transcript.detailed();
    const std::string pair_tag = std::to_string(i) + "," + std::to_string(j);
    std::size_t intercepted_forward = 0;
    std::size_t intercepted_back = 0;

    auto carry = [&](QubitSequence& seq, Link link, std::string payload) -> bool {
        if (detail) {
            transmit(ctx.transcript, ctx.adversary, std::move(link), seq, std::move(payload), ctx.adversary_rng);
            return false;
        }
        return ctx.adversary != nullptr && ctx.adversary->on_transit(link, seq, ctx.adversary_rng);
    };

    KeyDistReport report;
    std::vector<std::uint8_t> key_i;
    std::vector<std::uint8_t> key_j;
    const std::size_t max_rounds = 64 * key_bits;
    while (key_i.size() < key_bits && report.rounds < max_rounds) {
        ++report.rounds;
        QubitSequence seq;
        seq.append(prepare_named(StateLabel::PhiPlus));
        if (detail) {
            note(ctx, kAuctioneer, ActionKind::prepare, "SP1 (" + pair_tag + ") round " + std::to_string(report.rounds) + ": phi+");
        }
        Link forward{Stage::key_distribution, kAuctioneer, i, {}, {0, 1}, {}};
        intercepted_forward += carry(seq, forward, "SP1 halves of phi+ to Bob" + std::to_string(i) + "/Bob" + std::to_string(j));

        const bool sift_i = ctx.rng.coin();
        const bool sift_j = ctx.rng.coin();
        int bit_i = 0;
        int bit_j = 0;
        if (sift_i) {
            bit_i = bob_i.measure_z(seq, 0, "SP1", ctx.rng);
            bob_i.prepare_z(seq, 0, bit_i, "SP1", ctx.rng);
        } else {
            bob_i.reflect("SP1");
        }
        if (sift_j) {
            bit_j = bob_j.measure_z(seq, 1, "SP1", ctx.rng);
            bob_j.prepare_z(seq, 1, bit_j, "SP1", ctx.rng);
        } else {
            bob_j.reflect("SP1");
        }

        Link back{Stage::key_distribution, i, kAuctioneer, {}, {0, 1}, {}};
        intercepted_back += carry(seq, back, "SP1 returned halves");
        const std::size_t outcome = seq.bell_measure(0, 1, ctx.rng);
        ctx.audit.record(kAuctioneer, "SP1", QuantumAction::other, 2);
        const bool phi = outcome >= 2;
        if (detail) {
            note(ctx, kAuctioneer, ActionKind::announce,
                 "SP1 (" + pair_tag + ") Bell outcome " + bell_basis().label(outcome));
            note(ctx, i, ActionKind::announce, sift_i ? "SP1 SIFT" : "SP1 CTRL");
            note(ctx, j, ActionKind::announce, sift_j ? "SP1 SIFT" : "SP1 CTRL");
        }
        if (sift_i && sift_j) {
            if (phi) {
                key_i.push_back(static_cast<std::uint8_t>(bit_i));
                key_j.push_back(static_cast<std::uint8_t>(bit_j));
            }
            continue;
        }
        ++report.check_rounds;
        const bool error = (!sift_i && !sift_j) ? outcome != 2 : !phi;
        report.check_errors += error ? 1 : 0;
    }

    if (!detail) {
        const std::string n = std::to_string(report.rounds);
        note(ctx, kAuctioneer, ActionKind::prepare, "SP1 (" + pair_tag + "): " + n + " phi+ pairs");
        for (PartyId p : {i, j}) {
            const std::string out = ctx.transcript.send("Alice", "SP1: " + n + " halves to " + party_name(p));
            if (intercepted_forward > 0) {
                ctx.transcript.intercept(out, ctx.adversary->name());
            }
            ctx.transcript.receive(party_name(p), out);
            const std::string in = ctx.transcript.send(party_name(p), "SP1: " + n + " halves to Alice");
            if (intercepted_back > 0) {
                ctx.transcript.intercept(in, ctx.adversary->name());
            }
            ctx.transcript.receive("Alice", in);
        }
        note(ctx, kAuctioneer, ActionKind::announce, "SP1 (" + pair_tag + "): Bell outcomes announced");
    }
    note(ctx, kAuctioneer, ActionKind::announce,
         "SP1 (" + pair_tag + "): check errors " + std::to_string(report.check_errors) + "/" +
             std::to_string(report.check_rounds));

    const bool short_key = key_i.size() < key_bits;
    if (short_key || report.error_rate() > ctx.config.error_threshold) {
        note(ctx, kAuctioneer, ActionKind::announce, "SP1 (" + pair_tag + "): key distribution aborted");
        return report;
    }
    report.key = KeyMaterial{i, j, pack_bits(key_i), pack_bits(key_j)};
    return report;
}

std::vector<Commitment> sp2_commit(PartyId bidder, const BidString& bid, const KeyRing& keys, int num_bidders) {
    std::vector<Commitment> out;
    for (PartyId x = 1; x <= num_bidders; ++x) {
        if (x == bidder) {
            continue;
        }
        const Bytes32& k = keys.held_by(bidder, x);
        out.push_back(Commitment{bidder, x, xor_bytes(k, bid_digest(k, bid))});
    }
    return out;
}

Bytes32 open_commitment(const Commitment& commitment, const KeyRing& keys) {
    return xor_bytes(commitment.payload, keys.held_by(commitment.receiver, commitment.sender));
}

Preparation sp3_init(const SessionConfig& config, Rng& rng) {
    Preparation prep;
    const std::size_t n = config.qubits_per_bidder();
    prep.labels.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        prep.labels.push_back(bb84_random(rng));
        prep.qubits.append(prepare_named(prep.labels.back()));
    }
    return prep;
}

EncCtrlSchedule sp4_encode(ClassicalBidder& bidder, QubitSequence& incoming, const BidString& bid, bool permute,
                           Rng& rng) {
    const std::size_t n = incoming.size();
    const std::size_t m = static_cast<std::size_t>(bid.size());
    if (m > n) {
        throw std::invalid_argument("fewer qubits than bid bits");
    }
    std::vector<std::size_t> slots(n);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    for (std::size_t k = 0; k < m; ++k) {
        std::swap(slots[k], slots[k + static_cast<std::size_t>(rng.below(n - k))]);
    }
    EncCtrlSchedule s;
    s.enc_positions.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(m));
    s.ctrl_positions.assign(slots.begin() + static_cast<std::ptrdiff_t>(m), slots.end());
    std::sort(s.enc_positions.begin(), s.enc_positions.end());
    std::sort(s.ctrl_positions.begin(), s.ctrl_positions.end());
    for (std::size_t t = 0; t < m; ++t) {
        bidder.prepare_z(incoming, s.enc_positions[t], bid.bit(static_cast<int>(t)), "SP4", rng);
    }
    bidder.reflect("SP4", n - m);
    s.permutation = permute ? PermutationOp::random(n, rng) : PermutationOp::identity(n);
    incoming.permute(s.permutation);
    return s;
}

CtrlAnnouncement announce_ctrl(const EncCtrlSchedule& schedule) {
    CtrlAnnouncement a;
    for (std::size_t c : schedule.ctrl_positions) {
        a.pairs.emplace_back(c, schedule.permutation(c));
    }
    return a;
}

std::vector<std::size_t> announce_enc(const EncCtrlSchedule& schedule) {
    std::vector<std::size_t> order;
    for (std::size_t e : schedule.enc_positions) {
        order.push_back(schedule.permutation(e));
    }
    return order;
}

CheckReport sp5_eavescheck(QubitSequence& returned, const std::vector<StateLabel>& labels,
                           const CtrlAnnouncement& announcement, int bid_length, double threshold, Rng& rng) {
    const std::size_t n = labels.size();
    if (returned.size() != n) {
        throw ProtocolFault("returned sequence length differs from the prepared one");
    }
    if (bid_length < 0 || announcement.pairs.size() + static_cast<std::size_t>(bid_length) != n) {
        throw ProtocolFault("CTRL announcement must cover exactly n - m qubits");
    }
    std::set<std::size_t> originals;
    std::set<std::size_t> returns;
    for (const auto& [orig, ret] : announcement.pairs) {
        if (orig >= n || ret >= n || !originals.insert(orig).second || !returns.insert(ret).second) {
            throw ProtocolFault("CTRL announcement has a repeated or out-of-range position");
        }
    }
    CheckReport r;
    for (const auto& [orig, ret] : announcement.pairs) {
        const StateLabel label = labels[orig];
        const std::size_t outcome = returned.measure(ret, basis_of(label), rng);
        const bool error = static_cast<int>(outcome) != bb84_bit(label);
        ++r.checks;
        r.errors += error ? 1 : 0;
        if (is_diagonal(label)) {
            ++r.diagonal_checks;
            r.diagonal_errors += error ? 1 : 0;
        }
    }
    r.passed = r.error_rate() <= threshold;
    return r;
}

BidString sp6_decode(PartyId bidder, QubitSequence& returned, std::span<const std::size_t> enc_order,
                     const CtrlAnnouncement& ctrl, int bid_length, Rng& rng) {
    const std::size_t n = returned.size();
    if (enc_order.size() != static_cast<std::size_t>(bid_length)) {
        throw ProtocolFault("ENC announcement must list exactly m positions");
    }
    std::set<std::size_t> used;
    for (const auto& pr : ctrl.pairs) {
        used.insert(pr.second);
    }
    for (std::size_t p : enc_order) {
        if (p >= n || !used.insert(p).second) {
            throw ProtocolFault("ENC announcement repeats, overlaps CTRL or is out of range");
        }
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(enc_order.size());
    for (std::size_t p : enc_order) {
        bits.push_back(static_cast<std::uint8_t>(returned.measure(p, z_basis(), rng)));
    }
    return BidString(bidder, std::move(bits));
}

BidTransfer run_bid_transfer(SessionContext& ctx, PartyId bidder, const BidString& bid) {
    const SessionConfig& cfg = ctx.config;
    BidTransfer t;
    t.bidder = bidder;
    Preparation prep = sp3_init(cfg, ctx.rng);
    const std::size_t n = prep.labels.size();
    ctx.audit.record(kAuctioneer, "SP3", QuantumAction::other, n);
    note(ctx, kAuctioneer, ActionKind::prepare, "SP3: " + std::to_string(n) + " BB84 qubits for " + party_name(bidder));
    transmit(ctx.transcript, ctx.adversary, Link{Stage::bid_forward, kAuctioneer, bidder, {}, {}, {}}, prep.qubits,
             "SP3: " + std::to_string(n) + " qubits", ctx.adversary_rng);

    ClassicalBidder bob(bidder, ctx.audit);
    t.schedule = sp4_encode(bob, prep.qubits, bid, cfg.permutation_defense, ctx.rng);
    note(ctx, bidder, ActionKind::operate,
         "SP4: ENC on " + std::to_string(cfg.bid_length) + ", CTRL on " + std::to_string(n - static_cast<std::size_t>(cfg.bid_length)) +
             (cfg.permutation_defense ? ", sequence reordered" : ", order kept"));
    t.ctrl = announce_ctrl(t.schedule);
    Link back{Stage::bid_return, bidder, kAuctioneer, {}, announce_enc(t.schedule), {}};
    for (const auto& pr : t.ctrl.pairs) {
        back.check_positions.push_back(pr.second);
    }
    transmit(ctx.transcript, ctx.adversary, back, prep.qubits, "SP4: " + std::to_string(n) + " qubits", ctx.adversary_rng);
    note(ctx, kAuctioneer, ActionKind::announce, "SP5: authenticated receipt of " + party_name(bidder) + "'s qubits");

    note(ctx, bidder, ActionKind::announce, "SP5: CTRL " + pairs_text(t.ctrl));
    t.check = sp5_eavescheck(prep.qubits, prep.labels, t.ctrl, cfg.bid_length, cfg.error_threshold, ctx.rng);
    ctx.audit.record(kAuctioneer, "SP5", QuantumAction::other, t.check.diagonal_checks);
    ctx.audit.record(kAuctioneer, "SP5", QuantumAction::measure_z, t.check.checks - t.check.diagonal_checks);
    note(ctx, kAuctioneer, ActionKind::announce,
         "SP5: " + party_name(bidder) + " check errors " + std::to_string(t.check.errors) + "/" +
             std::to_string(t.check.checks));
    t.labels = std::move(prep.labels);
    t.returned = std::move(prep.qubits);
    return t;
}

BidString decode_transfer(SessionContext& ctx, BidTransfer& transfer, const BidString& bid) {
    std::vector<std::size_t> order = announce_enc(transfer.schedule);
    if (ctx.adversary != nullptr) {
        order = ctx.adversary->announce_enc_order(transfer.bidder, order, bid);
    }
    note(ctx, transfer.bidder, ActionKind::announce, "SP6: ENC order " + positions_text(order));
    BidString decoded = sp6_decode(transfer.bidder, transfer.returned, order, transfer.ctrl, ctx.config.bid_length, ctx.rng);
    ctx.audit.record(kAuctioneer, "SP6", QuantumAction::measure_z, order.size());
    note(ctx, kAuctioneer, ActionKind::measure, "SP6: " + party_name(transfer.bidder) + "'s ENC qubits measured in Z");
    return decoded;
}

std::vector<Confirmation> sp7_postconfirm(PartyId winner, const BidString& announced, const KeyRing& keys,
                                          const std::map<std::pair<PartyId, PartyId>, Bytes32>& received,
                                          int num_bidders) {
    std::vector<Confirmation> out;
    for (PartyId x = 1; x <= num_bidders; ++x) {
        if (x == winner) {
            continue;
        }
        const auto it = received.find({winner, x});
        const bool match =
            it != received.end() && bid_digest(keys.held_by(x, winner), announced) == it->second;
        out.push_back(Confirmation{x, match});
    }
    return out;
}

SqsbaRun run_sqsba(const SessionConfig& config, std::span<const BidString> bids, Adversary* adversary, Rng& rng) {
    config.validate();
    if (bids.size() != static_cast<std::size_t>(config.bidders())) {
        throw std::invalid_argument("expected one bid per bidder");
    }
    std::vector<BidString> own;
    for (std::size_t k = 0; k < bids.size(); ++k) {
        if (bids[k].size() != config.bid_length) {
            throw std::invalid_argument("bid length differs from the session's m");
        }
        own.push_back(bids[k].with_owner(static_cast<PartyId>(k + 1)));
    }

    SessionContext ctx(config, adversary, rng.child(0x5e55));
    SqsbaRun run;
    const int nb = config.bidders();
    double observed = 0.0;
    auto finish = [&](Verdict verdict, std::string stage) {
        run.outcome.verdict = verdict;
        run.outcome.abort_stage = std::move(stage);
        run.outcome.error_rate_observed = observed;
        if (verdict == Verdict::aborted_eavesdropping || verdict == Verdict::void_session) {
            run.outcome.winner.reset();
            run.outcome.winning_bid.reset();
            note(ctx, kAuctioneer, ActionKind::announce, run.outcome.abort_stage + ": session " + std::string(to_string(verdict)));
        }
        run.transcript = std::move(ctx.transcript);
        run.audit = std::move(ctx.audit);
        return std::move(run);
    };

    note(ctx, kAuctioneer, ActionKind::announce,
         "session: " + std::to_string(nb) + " bidders, m=" + std::to_string(config.bid_length) + ", " +
             std::to_string(config.qubits_per_bidder()) + " qubits per bidder");

    for (PartyId i = 1; i <= nb; ++i) {
        for (PartyId j = i + 1; j <= nb; ++j) {
            const KeyDistReport report = sp1_keydist(ctx, i, j);
            observed = std::max(observed, report.error_rate());
            if (!report.key) {
                return finish(Verdict::aborted_eavesdropping, "SP1");
            }
            run.keys.add(*report.key);
        }
    }

    std::map<std::pair<PartyId, PartyId>, Bytes32> received;
    for (PartyId i = 1; i <= nb; ++i) {
        for (const Commitment& c : sp2_commit(i, own[static_cast<std::size_t>(i - 1)], run.keys, nb)) {
            note(ctx, i, ActionKind::announce, "SP2: L_" + std::to_string(i) + std::to_string(c.receiver) + " to " +
                                                   party_name(c.receiver) + " " + to_hex(c.payload));
            received[{c.sender, c.receiver}] = open_commitment(c, run.keys);
            run.commitments.push_back(c);
        }
    }
    for (PartyId i = 1; i <= nb; ++i) {
        if (config.silent_after_commit && *config.silent_after_commit == i) {
            continue;
        }
        note(ctx, i, ActionKind::announce, "SP2: all commitments received");
    }
    if (config.silent_after_commit) {
        note(ctx, kAuctioneer, ActionKind::announce, "SP3: " + party_name(*config.silent_after_commit) + " silent after commitment");
        return finish(Verdict::void_session, "SP3");
    }

    std::vector<BidTransfer> transfers;
    try {
        for (PartyId i = 1; i <= nb; ++i) {
            transfers.push_back(run_bid_transfer(ctx, i, own[static_cast<std::size_t>(i - 1)]));
            const CheckReport& check = transfers.back().check;
            run.checks.push_back(check);
            observed = std::max(observed, check.error_rate());
            if (!check.passed) {
                return finish(Verdict::aborted_eavesdropping, "SP5");
            }
        }
    } catch (const ProtocolFault& fault) {
        note(ctx, kAuctioneer, ActionKind::announce, std::string("SP5: protocol fault: ") + fault.what());
        return finish(Verdict::void_session, "SP5");
    }

    try {
        for (PartyId i = 1; i <= nb; ++i) {
            run.decoded.push_back(decode_transfer(ctx, transfers[static_cast<std::size_t>(i - 1)], own[static_cast<std::size_t>(i - 1)]));
        }
    } catch (const ProtocolFault& fault) {
        run.decoded.clear();
        note(ctx, kAuctioneer, ActionKind::announce, std::string("SP6: protocol fault: ") + fault.what());
        return finish(Verdict::void_session, "SP6");
    }
    const std::size_t w = select_winner(run.decoded);
    const PartyId winner = static_cast<PartyId>(w + 1);
    BidString announced = run.decoded[w];
    if (adversary != nullptr) {
        announced = adversary->announce_winning_bid(winner, announced).with_owner(winner);
    }
    note(ctx, kAuctioneer, ActionKind::announce, "SP6: winner=" + party_name(winner) + " bid=" + announced.to_string());
    run.outcome.winner = winner;
    run.outcome.winning_bid = announced;

    bool fair = true;
    for (const Confirmation& c : sp7_postconfirm(winner, announced, run.keys, received, nb)) {
        note(ctx, c.verifier, ActionKind::announce, std::string("SP7: digest ") + (c.match ? "match" : "mismatch"));
        fair = fair && c.match;
    }
    return finish(fair ? Verdict::fair : Verdict::unfair, "");
}

SqsbaRun run_sqsba(const SessionConfig& config, std::span<const BidString> bids, Adversary* adversary) {
    Rng rng(config.seed);
    return run_sqsba(config, bids, adversary, rng);
}

} // namespace qsba
