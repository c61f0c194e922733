#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsba/adversary.hpp"
#include "qsba/auction.hpp"
#include "qsba/permutation.hpp"
#include "qsba/qubit_sequence.hpp"
#include "qsba/transcript.hpp"

namespace qsba {

using Bytes32 = std::array<std::uint8_t, 32>;

inline constexpr std::size_t kKeyBits = 256;

/// SHA-256 (OpenSSL).
Bytes32 sha256(std::span<const std::uint8_t> data);
/// Lowercase hexadecimal.
std::string to_hex(const Bytes32& bytes);
Bytes32 xor_bytes(const Bytes32& a, const Bytes32& b);
int hamming_distance(const Bytes32& a, const Bytes32& b);
/// The bid value left-zero-extended to 256 bits, big-endian.
Bytes32 pad_bid(const BidString& bid);
/// H(K xor pad(B)).
Bytes32 bid_digest(const Bytes32& key, const BidString& bid);

/// A malformed classical announcement (wrong count, repeated or out-of-range
/// positions, ENC/CTRL overlap).
class ProtocolFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SessionConfig {
    /// Auctioneer plus bidders; at least 3.
    int num_parties = 4;
    int bid_length = 8;
    /// Check-qubit overhead; must be positive.
    double delta = 0.25;
    /// A check fails when its error rate strictly exceeds this.
    double error_threshold = 0.05;
    std::uint64_t seed = 0;
    /// Bidders reorder their returned sequence (SP4). Off reproduces the
    /// undefended protocol that the swap attack breaks.
    bool permutation_defense = true;
    /// Keep one transcript event per SP1 round and per qubit.
    bool record_rounds = false;
    /// A bidder that commits in SP2 and then never notifies Alice.
    std::optional<PartyId> silent_after_commit;

    /// Throws std::invalid_argument.
    void validate() const;
    int bidders() const { return num_parties - 1; }
    std::size_t qubits_per_bidder() const;
};

/// ceil(4 m (1 + delta)), with a 1e-9 allowance so that products that are
/// integers up to rounding do not round up.
std::size_t qubits_per_bidder(int m, double delta);

/// The 256-bit key of a bidder pair, as held by each side.
struct KeyMaterial {
    PartyId first = 0;
    PartyId second = 0;
    Bytes32 first_bits{};
    Bytes32 second_bits{};

    bool agreed() const { return first_bits == second_bits; }
};

class KeyRing {
public:
    void add(const KeyMaterial& key);
    bool has(PartyId a, PartyId b) const;
    /// The copy held by `holder` of its key with `peer`. Throws std::invalid_argument when absent.
    const Bytes32& held_by(PartyId holder, PartyId peer) const;
    const KeyMaterial& pair(PartyId a, PartyId b) const;
    std::size_t size() const { return keys_.size(); }

private:
    std::map<std::pair<PartyId, PartyId>, KeyMaterial> keys_;
};

/// Mutable state shared by the stages of one session.
struct SessionContext {
    SessionContext(const SessionConfig& config, Adversary* adversary, Rng rng);

    SessionConfig config;
    Adversary* adversary = nullptr;
    Rng rng;
    /// The adversary draws from its own stream.
    Rng adversary_rng;
    Transcript transcript;
    CapabilityAudit audit;
};

/// A bidder restricted to the classical operations: prepare and measure in
/// the computational basis, and reflect. Every call is audited.
class ClassicalBidder {
public:
    ClassicalBidder(PartyId id, CapabilityAudit& audit) : id_(id), audit_(&audit) {}

    PartyId id() const { return id_; }
    int measure_z(QubitSequence& qubits, std::size_t position, std::string_view stage, Rng& rng);
    /// Replaces the qubit at `position` by a fresh |bit>.
    void prepare_z(QubitSequence& qubits, std::size_t position, int bit, std::string_view stage, Rng& rng);
    void reflect(std::string_view stage, std::size_t count = 1);

private:
    PartyId id_;
    CapabilityAudit* audit_;
};

struct KeyDistReport {
    /// Absent when the distribution aborted.
    std::optional<KeyMaterial> key;
    std::size_t rounds = 0;
    std::size_t check_rounds = 0;
    std::size_t check_errors = 0;

    double error_rate() const {
        return check_rounds == 0 ? 0.0 : static_cast<double>(check_errors) / static_cast<double>(check_rounds);
    }
};

/// Mediated key distribution between bidders i and j.
///
/// Each round Alice sends the halves of |phi+> to the two bidders, each of
/// whom either SIFTs (measure Z, resend a fresh |b>) or reflects (CTRL) with
/// probability 1/2, and Alice Bell-measures what returns. Both-SIFT rounds
/// with a phi+/phi- outcome yield one key bit; psi+/psi- both-SIFT rounds are
/// discarded. A both-CTRL round is an error unless the outcome is phi+; a
/// mixed round is an error on a psi outcome. Aborts when the check error
/// rate exceeds the threshold, or when 64 * key_bits rounds do not suffice.
KeyDistReport sp1_keydist(SessionContext& ctx, PartyId i, PartyId j, std::size_t key_bits = kKeyBits);

struct Commitment {
    PartyId sender = 0;
    PartyId receiver = 0;
    Bytes32 payload{};
};

/// L_ix = K_ix xor H(K_ix xor pad(B_i)) for every other bidder x.
std::vector<Commitment> sp2_commit(PartyId bidder, const BidString& bid, const KeyRing& keys, int num_bidders);
/// R_ix = L_ix xor K_ix, computed by the receiver with its own key copy.
Bytes32 open_commitment(const Commitment& commitment, const KeyRing& keys);

struct Preparation {
    QubitSequence qubits;
    /// Alice's private record.
    std::vector<StateLabel> labels;
};

Preparation sp3_init(const SessionConfig& config, Rng& rng);

struct EncCtrlSchedule {
    /// Original positions of the ENC qubits, in bid-bit order.
    std::vector<std::size_t> enc_positions;
    /// Original positions of the CTRL qubits, ascending.
    std::vector<std::size_t> ctrl_positions;
    PermutationOp permutation;
};

EncCtrlSchedule sp4_encode(ClassicalBidder& bidder, QubitSequence& incoming, const BidString& bid, bool permute,
                           Rng& rng);

/// SP5 disclosure: (original position, returned position) of every CTRL qubit.
struct CtrlAnnouncement {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

CtrlAnnouncement announce_ctrl(const EncCtrlSchedule& schedule);
/// SP6 disclosure: returned positions of the ENC qubits, in bid-bit order.
std::vector<std::size_t> announce_enc(const EncCtrlSchedule& schedule);

struct CheckReport {
    std::size_t checks = 0;
    std::size_t errors = 0;
    std::size_t diagonal_checks = 0;
    std::size_t diagonal_errors = 0;
    bool passed = true;

    double error_rate() const { return checks == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(checks); }
};

/// Alice measures each announced CTRL qubit in its preparation basis.
/// Throws ProtocolFault unless the announcement lists exactly n - m
/// distinct, in-range original and returned positions.
CheckReport sp5_eavescheck(QubitSequence& returned, const std::vector<StateLabel>& labels,
                           const CtrlAnnouncement& announcement, int bid_length, double threshold, Rng& rng);

/// Alice measures the announced ENC qubits in Z. Throws ProtocolFault unless
/// the order lists m distinct in-range positions disjoint from the CTRL ones.
BidString sp6_decode(PartyId bidder, QubitSequence& returned, std::span<const std::size_t> enc_order,
                     const CtrlAnnouncement& ctrl, int bid_length, Rng& rng);

/// SP3 to SP5 for one bidder, with the adversary on both legs.
struct BidTransfer {
    PartyId bidder = 0;
    std::vector<StateLabel> labels;
    EncCtrlSchedule schedule;
    CtrlAnnouncement ctrl;
    QubitSequence returned;
    CheckReport check;
};

BidTransfer run_bid_transfer(SessionContext& ctx, PartyId bidder, const BidString& bid);
/// SP6 for one bidder: the (possibly adversarial) ENC disclosure, then Alice's decoding.
BidString decode_transfer(SessionContext& ctx, BidTransfer& transfer, const BidString& bid);

struct Confirmation {
    PartyId verifier = 0;
    bool match = false;
};

/// Each bidder x other than the winner k compares H(K_kx xor pad(announced))
/// with the R_kx it derived in SP2.
std::vector<Confirmation> sp7_postconfirm(PartyId winner, const BidString& announced, const KeyRing& keys,
                                          const std::map<std::pair<PartyId, PartyId>, Bytes32>& received,
                                          int num_bidders);

struct SqsbaRun {
    AuctionOutcome outcome;
    Transcript transcript;
    CapabilityAudit audit;
    KeyRing keys;
    std::vector<Commitment> commitments;
    /// Alice's decoding, index = bidder id - 1; empty when SP6 was not reached.
    std::vector<BidString> decoded;
    std::vector<CheckReport> checks;
};

/// SP1 to SP7. bids[i] belongs to bidder i + 1. Stage aborts end the run
/// with their stage tag; a malformed announcement voids the session.
SqsbaRun run_sqsba(const SessionConfig& config, std::span<const BidString> bids, Adversary* adversary, Rng& rng);
/// Same, with the stream seeded from config.seed.
SqsbaRun run_sqsba(const SessionConfig& config, std::span<const BidString> bids, Adversary* adversary = nullptr);

} // namespace qsba
