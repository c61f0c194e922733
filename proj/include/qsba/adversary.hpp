#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qsba/auction.hpp"
#include "qsba/permutation.hpp"
#include "qsba/qubit_sequence.hpp"
#include "qsba/transcript.hpp"

namespace qsba {

/// Quantum links an adversary can sit on.
enum class Stage {
    /// Legacy Step 2: Alice -> Bob_i, bid carrier qubits plus decoys.
    distribute,
    /// Legacy Step 5: Bob_i -> Bob_j post-confirmation sequence.
    post_confirm,
    /// Legacy Step 6 and sqsba SP4: bidder -> Alice with the encoded bid.
    bid_return,
    /// sqsba SP1: the two halves of Alice's Bell pair travelling to the bidders and back.
    key_distribution,
    /// sqsba SP3: Alice -> Bob_i.
    bid_forward,
};

std::string_view to_string(Stage stage);

/// One transmission as seen by an omniscient observer.
struct Link {
    Stage stage = Stage::distribute;
    PartyId from = kAuctioneer;
    PartyId to = kAuctioneer;
    std::string channel;
    /// Positions that carry bid information, in bid-bit (or block) order.
    std::vector<std::size_t> data_positions;
    /// Decoy or CTRL positions.
    std::vector<std::size_t> check_positions;
};

/// Hooks through which attacks interpose on a protocol run. The defaults are
/// the honest behaviour, so an attack overrides only what it corrupts.
class Adversary {
public:
    virtual ~Adversary() = default;

    virtual std::string name() const = 0;

    /// Called for every quantum transmission. Returns true when the
    /// adversary touched the qubits, which the transcript logs as an intercept.
    virtual bool on_transit(const Link& link, QubitSequence& qubits, Rng& rng) {
        (void)link;
        (void)qubits;
        (void)rng;
        return false;
    }

    /// Auctioneer's announcement of the winning bid.
    virtual BidString announce_winning_bid(PartyId winner, const BidString& decoded) {
        (void)winner;
        return decoded;
    }

    /// Liu Step 7: the winner's disclosed Bell-pair permutation towards `verifier`.
    virtual PermutationOp announce_pair_permutation(PartyId winner, PartyId verifier, const PermutationOp& honest,
                                                    const BidString& committed) {
        (void)winner;
        (void)verifier;
        (void)committed;
        return honest;
    }

    /// sqsba SP6: a bidder's disclosed returned positions of its ENC qubits, in bit order.
    virtual std::vector<std::size_t> announce_enc_order(PartyId bidder, const std::vector<std::size_t>& honest,
                                                        const BidString& own_bid) {
        (void)bidder;
        (void)own_bid;
        return honest;
    }
};

/// Sends `qubits` over `link`: logs the send, lets the adversary (if any)
/// interpose, then logs the receipt. Fills in `link.channel`.
void transmit(Transcript& transcript, Adversary* adversary, Link link, QubitSequence& qubits, std::string payload,
              Rng& rng);

} // namespace qsba
