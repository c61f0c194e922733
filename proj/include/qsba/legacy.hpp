#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qsba/adversary.hpp"
#include "qsba/auction.hpp"
#include "qsba/quantum.hpp"
#include "qsba/qubit_sequence.hpp"
#include "qsba/transcript.hpp"

namespace qsba {

enum class LegacyVariant { liu, zhang1, zhang2 };

std::string_view to_string(LegacyVariant variant);
/// Accepts "liu", "zhang1", "zhang2". Throws std::invalid_argument.
LegacyVariant parse_legacy_variant(std::string_view name);

struct DecoyPolicy {
    /// Decoys inserted per protected sequence; each is a uniformly random
    /// BB84 state at a uniformly random position.
    std::size_t count = 4;
};

/// Where the decoys sit in the enlarged sequence (ascending) and what they are.
struct DecoyKey {
    std::vector<std::size_t> positions;
    std::vector<StateLabel> labels;
};

struct DecoyCheck {
    std::size_t checked = 0;
    std::size_t errors = 0;

    double error_rate() const { return checked == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(checked); }
};

DecoyKey insert_decoys(QubitSequence& sequence, const DecoyPolicy& policy, Rng& rng);
void remove_decoys(QubitSequence& sequence, const DecoyKey& key);
/// Measures every decoy in its preparation basis and counts mismatches.
DecoyCheck check_decoys(QubitSequence& received, const DecoyKey& key, Rng& rng);

/// Bit 0 leaves the qubit alone, bit 1 applies i*sigma_y.
StateVector liu_encode(const StateVector& prepared, int bit);
/// Measures in the preparation basis: unchanged state decodes to 0, the orthogonal state to 1.
int liu_decode(StateLabel prepared, const StateVector& returned, Rng& rng);
/// |0> for bit 0, |+> for bit 1.
StateVector zhang1_encode(int bit);
/// Rotation angle for a two-bit block: 00 -> 0, 01 -> pi/4, 10 -> pi/2, 11 -> 3pi/4.
double zhang2_theta(int block);
StateVector zhang2_encode(const StateVector& q, int block);
/// Bell label carrying a two-bit block: 00 -> psi+, 01 -> psi-, 10 -> phi+, 11 -> phi-.
StateLabel liu_bell_label(int block);

struct LegacyConfig {
    /// Decoys on the Step 2 distribution and the Liu Step 5 transfer.
    DecoyPolicy decoys{};
    /// A check fails when its error rate strictly exceeds this.
    double error_threshold = 0.05;
    /// Adds decoys to the Step 6 return path and to the Zhang Step 5 transfers.
    bool remedy_mode = false;
    /// Keep per-qubit events in the transcript.
    bool record_detail = false;
};

struct LegacyRun {
    AuctionOutcome outcome;
    Transcript transcript;
    CapabilityAudit audit;
    /// Alice's decoding of each bidder's bid (index = bidder id - 1); empty
    /// when the run aborted before Step 6 completed.
    std::vector<BidString> decoded;
};

/// Bidder ids are assigned by position: bids[i] belongs to bidder i + 1.
/// All bids must share one length and at least two bidders are required.
LegacyRun run_liu(std::span<const BidString> bids, const LegacyConfig& config, Adversary* adversary, Rng& rng);
LegacyRun run_zhang1(std::span<const BidString> bids, const LegacyConfig& config, Adversary* adversary, Rng& rng);
/// `q_pub` holds one shared single-qubit state per two-bit block; when absent
/// the run draws uniformly random BB84 states.
LegacyRun run_zhang2(std::span<const BidString> bids, const std::optional<std::vector<StateVector>>& q_pub,
                     const LegacyConfig& config, Adversary* adversary, Rng& rng);

LegacyRun run_legacy(LegacyVariant variant, std::span<const BidString> bids, const LegacyConfig& config,
                     Adversary* adversary, Rng& rng);

} // namespace qsba
