#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsba/rng.hpp"

namespace qsba {

using PartyId = int;

/// Party 0 is the auctioneer (Alice); bidders are 1 .. N-1.
inline constexpr PartyId kAuctioneer = 0;

std::string party_name(PartyId id);

/// An m-bit bid, most significant bit first, 1 <= m <= 64.
class BidString {
public:
    BidString() = default;
    /// Throws std::invalid_argument for an empty, oversized or non-binary bit list.
    BidString(PartyId owner, std::vector<std::uint8_t> bits);

    static BidString from_value(PartyId owner, std::uint64_t value, int m);
    static BidString random(PartyId owner, int m, Rng& rng);
    /// Parses "0101..." strings.
    static BidString parse(PartyId owner, std::string_view bits);

    PartyId owner() const noexcept { return owner_; }
    int size() const noexcept { return static_cast<int>(bits_.size()); }
    int bit(int i) const { return bits_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    std::uint64_t value() const;
    std::string to_string() const;

    /// Same bits, different owner.
    BidString with_owner(PartyId owner) const { return BidString(owner, bits_); }

    /// Two-bit blocks for Bell-pair and rotation encodings. Odd lengths get a
    /// leading 0 pad bit, so block 0 of an odd-length bid is (0, b0).
    std::vector<int> two_bit_blocks() const;
    static BidString from_two_bit_blocks(PartyId owner, std::span<const int> blocks, int m);

    friend bool operator==(const BidString& a, const BidString& b) { return a.bits_ == b.bits_; }

private:
    PartyId owner_ = 0;
    std::vector<std::uint8_t> bits_;
};

enum class Verdict { fair, unfair, aborted_eavesdropping, void_session };

std::string_view to_string(Verdict v);

struct AuctionOutcome {
    std::optional<PartyId> winner;
    std::optional<BidString> winning_bid;
    Verdict verdict = Verdict::fair;
    double error_rate_observed = 0.0;
    /// Stage that aborted the run, empty otherwise.
    std::string abort_stage;

    bool aborted() const { return verdict == Verdict::aborted_eavesdropping || verdict == Verdict::void_session; }
};

/// Highest value wins; among equal bids the lowest party id wins.
/// Returns the index into `bids`.
std::size_t select_winner(std::span<const BidString> bids);

} // namespace qsba
