#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "qsba/attacks.hpp"
#include "qsba/sqsba.hpp"

using namespace qsba;

namespace {

Bytes32 fixed_key(std::uint8_t seed) {
    Bytes32 k{};
    for (std::size_t i = 0; i < k.size(); ++i) {
        k[i] = static_cast<std::uint8_t>(seed * 31 + i * 7);
    }
    return k;
}

std::vector<BidString> random_bids(int count, int m, Rng& rng) {
    std::vector<BidString> bids;
    for (int i = 1; i <= count; ++i) {
        bids.push_back(BidString::random(i, m, rng));
    }
    return bids;
}

bool all_semi_quantum(const SqsbaRun& run, int bidders) {
    for (PartyId p = 1; p <= bidders; ++p) {
        if (!run.audit.semi_quantum(p)) {
            return false;
        }
    }
    return true;
}

// Measures every SP1 qubit in Z and resends the outcome.
class KeyDistInterceptor : public Adversary {
public:
    std::string name() const override { return "sp1 intercept"; }
    bool on_transit(const Link& link, QubitSequence& qubits, Rng& rng) override {
        if (link.stage != Stage::key_distribution) {
            return false;
        }
        for (std::size_t p : link.data_positions) {
            const auto bit = qubits.measure(p, z_basis(), rng);
            qubits.replace(p, prepare_named(bit == 0 ? StateLabel::Z0 : StateLabel::Z1), rng);
        }
        return true;
    }
};

} // namespace

TEST_CASE("sha256 matches the standard test vectors") {
    const std::string abc = "abc";
    const auto* p = reinterpret_cast<const std::uint8_t*>(abc.data());
    CHECK(to_hex(sha256({p, abc.size()})) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(to_hex(sha256({})) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("bids are left-zero-extended to 256 bits") {
    const Bytes32 padded = pad_bid(BidString::parse(1, "1000000001"));
    for (std::size_t i = 0; i < 30; ++i) {
        CHECK(padded[i] == 0);
    }
    CHECK(padded[30] == 0x02);
    CHECK(padded[31] == 0x01);
}

TEST_CASE("xor and hamming helpers") {
    const Bytes32 a = fixed_key(1);
    const Bytes32 b = fixed_key(2);
    CHECK(xor_bytes(xor_bytes(a, b), b) == a);
    CHECK(hamming_distance(a, a) == 0);
    Bytes32 c = a;
    c[5] ^= 0x81;
    CHECK(hamming_distance(a, c) == 2);
}

TEST_CASE("digests avalanche on a single bid-bit flip") {
    Rng rng(2024);
    double total = 0.0;
    const int samples = 512;
    for (int s = 0; s < samples; ++s) {
        Bytes32 key{};
        for (auto& byte : key) {
            byte = static_cast<std::uint8_t>(rng.below(256));
        }
        const BidString bid = BidString::random(1, 16, rng);
        std::vector<std::uint8_t> bits = bid.bits();
        bits[rng.below(bits.size())] ^= 1;
        total += hamming_distance(bid_digest(key, bid), bid_digest(key, BidString(1, bits)));
    }
    // Mean of Bin(256, 1/2) is 128 with standard error 8 / sqrt(512).
    CHECK(std::abs(total / samples - 128.0) < 4.0 * 8.0 / std::sqrt(static_cast<double>(samples)));
}

TEST_CASE("commitments bind over a 2^20 candidate search") {
    const Bytes32 key = fixed_key(9);
    const BidString target = BidString::from_value(1, 0x5a5a5, 20);
    const Bytes32 digest = bid_digest(key, target);
    int collisions = 0;
    for (std::uint64_t v = 0; v < (1u << 20); ++v) {
        if (v != target.value() && bid_digest(key, BidString::from_value(1, v, 20)) == digest) {
            ++collisions;
        }
    }
    CHECK(collisions == 0);
}

TEST_CASE("qubit count per bidder rounds 4m(1+delta) up") {
    CHECK(qubits_per_bidder(8, 0.25) == 40);
    CHECK(qubits_per_bidder(8, 0.1) == 36);
    CHECK(qubits_per_bidder(5, 0.2) == 24);
    CHECK(qubits_per_bidder(3, 0.01) == 13);
}

TEST_CASE("session configuration validation") {
    SessionConfig c;
    CHECK_NOTHROW(c.validate());
    c.num_parties = 2;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SessionConfig{};
    c.delta = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SessionConfig{};
    c.bid_length = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("key distribution agrees in 1000 noiseless runs") {
    SessionConfig cfg;
    cfg.num_parties = 3;
    int agreed = 0;
    for (std::uint64_t run = 0; run < 1000; ++run) {
        SessionContext ctx(cfg, nullptr, Rng::for_trial(31, run));
        const KeyDistReport r = sp1_keydist(ctx, 1, 2);
        REQUIRE(r.key);
        agreed += r.key->agreed() ? 1 : 0;
        REQUIRE(r.check_errors == 0);
    }
    CHECK(agreed == 1000);
}

TEST_CASE("key distribution only uses classical moves for the bidders") {
    SessionConfig cfg;
    cfg.num_parties = 3;
    SessionContext ctx(cfg, nullptr, Rng(5));
    const KeyDistReport r = sp1_keydist(ctx, 1, 2, 64);
    REQUIRE(r.key);
    CHECK(ctx.audit.semi_quantum(1));
    CHECK(ctx.audit.semi_quantum(2));
    CHECK(ctx.audit.count(1, QuantumAction::reflect) > 0);
    CHECK(ctx.audit.count(1, QuantumAction::measure_z) > 0);
    CHECK(ctx.audit.count(1, QuantumAction::prepare_z) == ctx.audit.count(1, QuantumAction::measure_z));
}

TEST_CASE("a Z intercept-resend on key distribution is caught") {
    SessionConfig cfg;
    cfg.num_parties = 3;
    KeyDistInterceptor eve;
    for (std::uint64_t run = 0; run < 10; ++run) {
        SessionContext ctx(cfg, &eve, Rng::for_trial(17, run));
        const KeyDistReport r = sp1_keydist(ctx, 1, 2, 32);
        CHECK_FALSE(r.key);
        CHECK(r.error_rate() > cfg.error_threshold);
    }
}

TEST_CASE("commitments open to the digest of the bid") {
    KeyRing keys;
    keys.add(KeyMaterial{1, 2, fixed_key(3), fixed_key(3)});
    keys.add(KeyMaterial{1, 3, fixed_key(4), fixed_key(4)});
    keys.add(KeyMaterial{2, 3, fixed_key(5), fixed_key(5)});
    const BidString bid = BidString::parse(1, "01100111");
    const std::vector<Commitment> cs = sp2_commit(1, bid, keys, 3);
    REQUIRE(cs.size() == 2);
    for (const Commitment& c : cs) {
        CHECK(c.sender == 1);
        const Bytes32& k = keys.held_by(c.receiver, 1);
        CHECK(c.payload == xor_bytes(k, bid_digest(k, bid)));
        CHECK(open_commitment(c, keys) == bid_digest(k, bid));
    }
    CHECK(keys.held_by(2, 1) == keys.held_by(1, 2));
    CHECK_THROWS_AS(keys.held_by(1, 4), std::invalid_argument);
}

TEST_CASE("bid transfer decodes the bid and passes the checks") {
    SessionConfig cfg;
    Rng rng(71);
    for (bool defense : {true, false}) {
        cfg.permutation_defense = defense;
        for (int run = 0; run < 20; ++run) {
            SessionContext ctx(cfg, nullptr, rng.child(static_cast<std::uint64_t>(run)));
            const BidString bid = BidString::random(2, cfg.bid_length, rng);
            BidTransfer t = run_bid_transfer(ctx, 2, bid);
            CHECK(t.check.passed);
            CHECK(t.check.errors == 0);
            CHECK(t.check.checks == cfg.qubits_per_bidder() - static_cast<std::size_t>(cfg.bid_length));
            CHECK(decode_transfer(ctx, t, bid) == bid);
            CHECK(ctx.audit.semi_quantum(2));
            std::set<std::size_t> enc(t.schedule.enc_positions.begin(), t.schedule.enc_positions.end());
            for (std::size_t c : t.schedule.ctrl_positions) {
                CHECK(enc.count(c) == 0);
            }
            if (!defense) {
                CHECK(t.schedule.permutation == PermutationOp::identity(cfg.qubits_per_bidder()));
            }
        }
    }
}

TEST_CASE("malformed disclosures are protocol faults") {
    SessionConfig cfg;
    SessionContext ctx(cfg, nullptr, Rng(3));
    const BidString bid = BidString::parse(1, "10110010");
    BidTransfer t = run_bid_transfer(ctx, 1, bid);
    Rng rng(4);

    CtrlAnnouncement short_ctrl = t.ctrl;
    short_ctrl.pairs.pop_back();
    QubitSequence copy = t.returned;
    CHECK_THROWS_AS(sp5_eavescheck(copy, t.labels, short_ctrl, cfg.bid_length, cfg.error_threshold, rng),
                    ProtocolFault);

    CtrlAnnouncement repeated = t.ctrl;
    repeated.pairs[1].second = repeated.pairs[0].second;
    copy = t.returned;
    CHECK_THROWS_AS(sp5_eavescheck(copy, t.labels, repeated, cfg.bid_length, cfg.error_threshold, rng), ProtocolFault);

    std::vector<std::size_t> enc = announce_enc(t.schedule);
    std::vector<std::size_t> overlapping = enc;
    overlapping[0] = t.ctrl.pairs[0].second;
    copy = t.returned;
    CHECK_THROWS_AS(sp6_decode(1, copy, overlapping, t.ctrl, cfg.bid_length, rng), ProtocolFault);
    std::vector<std::size_t> out_of_range = enc;
    out_of_range[0] = 1000;
    copy = t.returned;
    CHECK_THROWS_AS(sp6_decode(1, copy, out_of_range, t.ctrl, cfg.bid_length, rng), ProtocolFault);
}

TEST_CASE("post-confirmation matches only the committed bid") {
    KeyRing keys;
    keys.add(KeyMaterial{1, 2, fixed_key(6), fixed_key(6)});
    keys.add(KeyMaterial{1, 3, fixed_key(7), fixed_key(7)});
    keys.add(KeyMaterial{2, 3, fixed_key(8), fixed_key(8)});
    const BidString bid = BidString::parse(1, "11001010");
    std::map<std::pair<PartyId, PartyId>, Bytes32> received;
    for (const Commitment& c : sp2_commit(1, bid, keys, 3)) {
        received[{c.sender, c.receiver}] = open_commitment(c, keys);
    }
    for (const Confirmation& c : sp7_postconfirm(1, bid, keys, received, 3)) {
        CHECK(c.match);
    }
    for (const Confirmation& c : sp7_postconfirm(1, BidString::parse(1, "11001011"), keys, received, 3)) {
        CHECK_FALSE(c.match);
    }
}

TEST_CASE("honest sessions are fair, private and semi-quantum") {
    SessionConfig cfg;
    Rng rng(1234);
    for (int run = 0; run < 10; ++run) {
        const std::vector<BidString> bids = random_bids(cfg.bidders(), cfg.bid_length, rng);
        const SqsbaRun r = run_sqsba(cfg, bids, nullptr, rng);
        REQUIRE(r.outcome.verdict == Verdict::fair);
        const std::size_t best = select_winner(bids);
        CHECK(*r.outcome.winner == static_cast<PartyId>(best + 1));
        CHECK(*r.outcome.winning_bid == bids[best]);
        CHECK(all_semi_quantum(r, cfg.bidders()));
        CHECK(r.keys.size() == 3);
        CHECK(r.transcript.sends_matched());
        for (std::size_t i = 0; i < bids.size(); ++i) {
            if (bids[i] == bids[best]) {
                continue;
            }
            for (const Event& e : r.transcript.events()) {
                if (e.kind == ActionKind::announce) {
                    CHECK(e.payload.find(bids[i].to_string()) == std::string::npos);
                }
            }
        }
    }
}

TEST_CASE("sessions are deterministic in their seed") {
    SessionConfig cfg;
    cfg.seed = 42;
    cfg.record_rounds = true;
    Rng rng(0);
    const std::vector<BidString> bids = random_bids(cfg.bidders(), cfg.bid_length, rng);
    const std::string a = run_sqsba(cfg, bids).transcript.to_jsonl();
    const std::string b = run_sqsba(cfg, bids).transcript.to_jsonl();
    CHECK(a == b);
    cfg.seed = 43;
    CHECK(run_sqsba(cfg, bids).transcript.to_jsonl() != a);
}

TEST_CASE("a bidder silent after committing voids the session") {
    SessionConfig cfg;
    cfg.silent_after_commit = 2;
    Rng rng(6);
    const std::vector<BidString> bids = random_bids(cfg.bidders(), cfg.bid_length, rng);
    const SqsbaRun r = run_sqsba(cfg, bids, nullptr, rng);
    CHECK(r.outcome.verdict == Verdict::void_session);
    CHECK(r.outcome.abort_stage == "SP3");
}

TEST_CASE("tied top bids go to the lowest index") {
    SessionConfig cfg;
    const std::vector<BidString> bids{BidString::parse(1, "00000011"), BidString::parse(2, "11110000"),
                                      BidString::parse(3, "11110000")};
    const SqsbaRun r = run_sqsba(cfg, bids);
    CHECK(r.outcome.verdict == Verdict::fair);
    CHECK(*r.outcome.winner == 2);
}

TEST_CASE("bid-altering adversaries are caught in post-confirmation") {
    SessionConfig cfg;
    Rng rng(555);
    int altered = 0;
    for (int run = 0; run < 30; ++run) {
        const std::vector<BidString> bids = random_bids(cfg.bidders(), cfg.bid_length, rng);
        FalseEncOrderAdversary order;
        EncFlipAdversary flip;
        for (Adversary* eve : std::initializer_list<Adversary*>{&order, &flip}) {
            const SqsbaRun r = run_sqsba(cfg, bids, eve, rng);
            REQUIRE(r.outcome.winner);
            const BidString& committed = bids[static_cast<std::size_t>(*r.outcome.winner - 1)];
            if (!(*r.outcome.winning_bid == committed)) {
                ++altered;
                CHECK(r.outcome.verdict == Verdict::unfair);
            }
            CHECK(all_semi_quantum(r, cfg.bidders()));
        }
    }
    CHECK(altered > 30);
}

TEST_CASE("the swap attack reads every bid when the defense is off") {
    SessionConfig cfg;
    cfg.permutation_defense = false;
    Rng rng(808);
    for (int run = 0; run < 10; ++run) {
        const std::vector<BidString> bids = random_bids(cfg.bidders(), cfg.bid_length, rng);
        SwapAdversary eve;
        const SqsbaRun r = run_sqsba(cfg, bids, &eve, rng);
        CHECK(r.outcome.verdict != Verdict::aborted_eavesdropping);
        for (PartyId p = 1; p <= cfg.bidders(); ++p) {
            REQUIRE(eve.recovered().count(p) == 1);
            std::vector<std::uint8_t> bits;
            for (int b : eve.recovered().at(p)) {
                bits.push_back(static_cast<std::uint8_t>(b));
            }
            CHECK(BidString(p, bits) == bids[static_cast<std::size_t>(p - 1)]);
        }
    }
}
