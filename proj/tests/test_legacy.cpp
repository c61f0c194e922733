#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qsba/legacy.hpp"

using namespace qsba;

namespace {

constexpr std::array<StateLabel, 4> kBb84{StateLabel::Z0, StateLabel::Z1, StateLabel::XPlus, StateLabel::XMinus};

std::vector<BidString> random_bids(int count, int m, Rng& rng) {
    std::vector<BidString> bids;
    for (int i = 1; i <= count; ++i) {
        bids.push_back(BidString::random(i, m, rng));
    }
    return bids;
}

std::size_t highest(const std::vector<BidString>& bids) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < bids.size(); ++i) {
        if (bids[i].value() > bids[best].value()) {
            best = i;
        }
    }
    return best;
}

class ReplaceEverything : public Adversary {
public:
    std::string name() const override { return "replace"; }
    bool on_transit(const Link&, QubitSequence& qubits, Rng& rng) override {
        for (std::size_t i = 0; i < qubits.size(); ++i) {
            qubits.replace(i, prepare_named(bb84_random(rng)), rng);
        }
        return true;
    }
};

} // namespace

TEST_CASE("bid strings") {
    const BidString b = BidString::parse(2, "1011");
    CHECK(b.value() == 11);
    CHECK(b.to_string() == "1011");
    CHECK(BidString::from_value(1, 11, 4) == b);
    CHECK(b.two_bit_blocks() == std::vector<int>{2, 3});
    const BidString odd = BidString::parse(1, "101");
    // Odd lengths gain a leading zero pad bit.
    CHECK(odd.two_bit_blocks() == std::vector<int>{1, 1});
    CHECK_THROWS(BidString::parse(1, "10a1"));
}

TEST_CASE("winner selection breaks ties by lowest index") {
    const std::vector<BidString> bids{BidString::parse(1, "0110"), BidString::parse(2, "1001"),
                                      BidString::parse(3, "1001")};
    CHECK(select_winner(bids) == 1);
}

TEST_CASE("liu encoding round-trips for every BB84 carrier") {
    Rng rng(1);
    for (StateLabel label : kBb84) {
        for (int bit : {0, 1}) {
            const StateVector sent = liu_encode(prepare_named(label), bit);
            CHECK(liu_decode(label, sent, rng) == bit);
        }
    }
}

TEST_CASE("zhang encodings") {
    CHECK(states_equal_up_to_phase(zhang1_encode(0), prepare_named(StateLabel::Z0)));
    CHECK(states_equal_up_to_phase(zhang1_encode(1), prepare_named(StateLabel::XPlus)));
    const StateVector q = prepare_named(StateLabel::Z0);
    const std::array<StateLabel, 4> expected{StateLabel::Z0, StateLabel::XMinus, StateLabel::Z1, StateLabel::XPlus};
    for (int block = 0; block < 4; ++block) {
        CHECK(zhang2_theta(block) == doctest::Approx(block * oracle::pi / 4.0));
        CHECK(states_equal_up_to_phase(zhang2_encode(q, block), prepare_named(expected[static_cast<std::size_t>(block)])));
    }
    CHECK(liu_bell_label(0) == StateLabel::PsiPlus);
    CHECK(liu_bell_label(3) == StateLabel::PhiMinus);
}

TEST_CASE("decoys survive an untouched channel and are removed cleanly") {
    Rng rng(8);
    QubitSequence seq;
    for (int i = 0; i < 6; ++i) {
        seq.append(prepare_named(i % 2 == 0 ? StateLabel::Z1 : StateLabel::Z0));
    }
    const DecoyKey key = insert_decoys(seq, DecoyPolicy{5}, rng);
    CHECK(seq.size() == 11);
    CHECK(key.positions.size() == 5);
    const DecoyCheck check = check_decoys(seq, key, rng);
    CHECK(check.checked == 5);
    CHECK(check.errors == 0);
    remove_decoys(seq, key);
    REQUIRE(seq.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(seq.measure(i, z_basis(), rng) == (i % 2 == 0 ? 1u : 0u));
    }
}

TEST_CASE("a decoy replaced by a random BB84 state errs with probability 1/2") {
    // Same basis: wrong half the time. Other basis: uniform outcome.
    Rng rng(13);
    std::uint64_t checked = 0;
    std::uint64_t errors = 0;
    for (int t = 0; t < 2000; ++t) {
        QubitSequence seq;
        const DecoyKey key = insert_decoys(seq, DecoyPolicy{4}, rng);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            seq.replace(i, prepare_named(bb84_random(rng)), rng);
        }
        const DecoyCheck c = check_decoys(seq, key, rng);
        checked += c.checked;
        errors += c.errors;
    }
    CHECK(oracle::wilson_contains(errors, checked, 4.0, 0.5));
}

TEST_CASE("honest legacy runs are fair and decode every bid") {
    Rng rng(77);
    for (LegacyVariant v : {LegacyVariant::liu, LegacyVariant::zhang1, LegacyVariant::zhang2}) {
        for (bool remedy : {false, true}) {
            LegacyConfig cfg;
            cfg.remedy_mode = remedy;
            for (int run = 0; run < 15; ++run) {
                const std::vector<BidString> bids = random_bids(3, run % 2 == 0 ? 8 : 7, rng);
                const LegacyRun r = run_legacy(v, bids, cfg, nullptr, rng);
                CAPTURE(to_string(v));
                CHECK(r.outcome.verdict == Verdict::fair);
                REQUIRE(r.outcome.winner);
                CHECK(*r.outcome.winner == static_cast<PartyId>(highest(bids) + 1));
                REQUIRE(r.decoded.size() == bids.size());
                for (std::size_t i = 0; i < bids.size(); ++i) {
                    CHECK(r.decoded[i] == bids[i]);
                }
                CHECK(r.transcript.sends_matched());
            }
        }
    }
}

TEST_CASE("zhang post-confirmation needs more than classical operations") {
    Rng rng(4);
    // A 1 bit forces the diagonal basis in both Zhang variants.
    const std::vector<BidString> bids{BidString::parse(1, "1111"), BidString::parse(2, "0101")};
    for (LegacyVariant v : {LegacyVariant::zhang1, LegacyVariant::zhang2}) {
        const LegacyRun r = run_legacy(v, bids, LegacyConfig{}, nullptr, rng);
        REQUIRE(r.outcome.verdict == Verdict::fair);
        CHECK_FALSE(r.audit.semi_quantum(1));
    }
}

TEST_CASE("replacing every travelling qubit trips the decoy check") {
    Rng rng(99);
    ReplaceEverything eve;
    int aborted = 0;
    for (int run = 0; run < 20; ++run) {
        const std::vector<BidString> bids = random_bids(3, 8, rng);
        const LegacyRun r = run_liu(bids, LegacyConfig{}, &eve, rng);
        aborted += r.outcome.verdict == Verdict::aborted_eavesdropping ? 1 : 0;
    }
    // Each Step 2 check sees 4 decoys wrong with probability 1/2 each.
    CHECK(aborted >= 18);
}

TEST_CASE("legacy input validation") {
    Rng rng(1);
    const std::vector<BidString> one{BidString::parse(1, "01")};
    CHECK_THROWS_AS(run_liu(one, LegacyConfig{}, nullptr, rng), std::invalid_argument);
    const std::vector<BidString> mixed{BidString::parse(1, "01"), BidString::parse(2, "011")};
    CHECK_THROWS_AS(run_liu(mixed, LegacyConfig{}, nullptr, rng), std::invalid_argument);
    CHECK_THROWS_AS(parse_legacy_variant("zhang3"), std::invalid_argument);
}
