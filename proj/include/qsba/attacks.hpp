#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsba/adversary.hpp"
#include "qsba/auction.hpp"
#include "qsba/legacy.hpp"
#include "qsba/quantum.hpp"
#include "qsba/stats.hpp"

namespace qsba {

enum class CnotMode { both_ways, return_only };
enum class FalsePermutationTarget { liu, sqsba };
/// flip: i*sigma_y on every returned qubit. random_replace: every returned
/// qubit swapped for a fresh uniformly random BB84 state.
enum class DisturbanceMode { flip, random_replace };
enum class CollusionMethod { majority, usd };

std::string_view to_string(CnotMode mode);
std::string_view to_string(FalsePermutationTarget target);
std::string_view to_string(DisturbanceMode mode);
std::string_view to_string(CollusionMethod method);
CnotMode parse_cnot_mode(std::string_view name);
FalsePermutationTarget parse_false_permutation_target(std::string_view name);
DisturbanceMode parse_disturbance_mode(std::string_view name);
CollusionMethod parse_collusion_method(std::string_view name);

struct AttackConfig {
    /// Copies held by the attacker (or colluders).
    int l = 1;
    int m = 8;
    /// Parties including the auctioneer; 0 means l + 2, the smallest auction
    /// in which one bid travels as l copies to other bidders.
    int N = 0;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    /// Wilson interval width in standard deviations.
    double z = 4.0;

    /// Every bid bit takes this value instead of a uniform one.
    std::optional<int> fixed_bit;
    /// basis_split: every two-bit block takes this value (0..3).
    std::optional<int> fixed_state;
    /// basis_split: the public state (a BB84 label).
    StateLabel q_pub = StateLabel::Z0;

    CnotMode cnot_mode = CnotMode::both_ways;
    /// Bidders reorder their returned sequence (swap and CNOT attacks).
    bool defense = false;
    FalsePermutationTarget against = FalsePermutationTarget::liu;
    DisturbanceMode disturbance = DisturbanceMode::flip;
    /// Liu return-path decoys.
    bool remedy = false;
    std::size_t decoys = 8;
    CollusionMethod collusion = CollusionMethod::majority;

    double delta = 0.25;
    double threshold = 0.05;

    int parties() const { return N == 0 ? l + 2 : N; }
    /// Throws std::invalid_argument.
    void validate() const;
};

/// Named estimates, each paired with the value theory predicts.
struct AttackReport {
    std::string attack;
    std::vector<Metric> metrics;

    bool has(std::string_view name) const;
    /// Throws std::out_of_range for an unknown name.
    const Metric& metric(std::string_view name) const;
    bool all_consistent() const;
};

AttackReport attack_semi_honest_projective(const AttackConfig& cfg);
AttackReport attack_semi_honest_usd(const AttackConfig& cfg);
AttackReport attack_multicopy_majority(const AttackConfig& cfg);
AttackReport attack_multicopy_usd(const AttackConfig& cfg);
/// Same decision rules as the multicopy attacks, with every copy held and
/// measured by a different colluding bidder on its own random stream.
AttackReport attack_collusion(const AttackConfig& cfg);
/// Requires even l >= 2 and a BB84 q_pub.
AttackReport attack_zhang2_basis_split(const AttackConfig& cfg);
/// Requires defense off for both_ways.
AttackReport attack_cnot(CnotMode mode, const AttackConfig& cfg);
AttackReport attack_intercept_resend_swap(bool defense, const AttackConfig& cfg);
AttackReport attack_false_permutation(FalsePermutationTarget target, const AttackConfig& cfg);
/// Liu Step 6 disturbance, with cfg.disturbance and cfg.remedy.
AttackReport attack_disturbance(const AttackConfig& cfg);

/// Names accepted by run_attack.
const std::vector<std::string>& attack_names();
/// Dispatches by name, reading modes from `cfg`. "projective", "usd" and
/// "majority" use the single-copy attack at l = 1 and the multicopy one
/// otherwise. Throws std::invalid_argument for an unknown name.
AttackReport run_attack(std::string_view name, const AttackConfig& cfg);

// Closed forms that are not binomial figures of merit.

/// Probability that a uniformly random m-bit bid admits a different bid
/// reachable by reordering its Bell pairs (odd m: leading pad bit fixed at 0).
double liu_false_permutation_success(int m);
/// Per-check swap-attack detection with the permutation defense: (n-1)/(2n).
double swap_check_detection(std::size_t n);
/// Probability that at least one of `bidders` return-path checks with
/// `decoys` decoys, each wrong with probability `p_error`, exceeds `threshold`.
double decoy_abort_probability(std::size_t decoys, double p_error, double threshold, int bidders);

/// Bell-pair reordering sigma with blocks(sigma(p)) giving a different
/// valid bid, found as the first transposition (a < b) of unequal blocks.
std::optional<PermutationOp> liu_alternative_order(const BidString& bid);

// Adversaries, usable with run_sqsba and the legacy runs.

/// Eve CNOTs each travelling qubit onto a fresh |0> ancilla.
class CnotAdversary : public Adversary {
public:
    explicit CnotAdversary(CnotMode mode) : mode_(mode) {}

    std::string name() const override;
    bool on_transit(const Link& link, QubitSequence& qubits, Rng& rng) override;

    /// Z readout of the ancillas at the ENC positions of the latest return, in bit order.
    const std::vector<int>& last_readout() const { return readout_; }
    /// Smallest ancilla purity seen right after a return-leg CNOT (both_ways).
    double min_purity() const { return min_purity_; }

private:
    CnotMode mode_;
    std::map<PartyId, std::vector<QubitRef>> ancillas_;
    std::vector<int> readout_;
    double min_purity_ = 1.0;
};

/// Eve keeps Alice's qubits, hands the bidder random BB84 states, reads the
/// bidder's ENC qubits in Z on the way back and returns Alice's originals.
class SwapAdversary : public Adversary {
public:
    std::string name() const override { return "swap intercept-resend"; }
    bool on_transit(const Link& link, QubitSequence& qubits, Rng& rng) override;

    /// Bits Eve read from each bidder, in bit order.
    const std::map<PartyId, std::vector<int>>& recovered() const { return recovered_; }

private:
    std::map<PartyId, QubitSequence> stash_;
    std::map<PartyId, std::vector<int>> recovered_;
};

/// i*sigma_y on the ENC qubits of every returned sequence.
class EncFlipAdversary : public Adversary {
public:
    std::string name() const override { return "ENC flip"; }
    bool on_transit(const Link& link, QubitSequence& qubits, Rng& rng) override;
};

/// A bidder (every bidder when unset) announces its ENC positions with the
/// 1 bits first, so Alice decodes the largest bid with the same weight.
class FalseEncOrderAdversary : public Adversary {
public:
    explicit FalseEncOrderAdversary(std::optional<PartyId> attacker = std::nullopt) : attacker_(attacker) {}

    std::string name() const override { return "false ENC order"; }
    std::vector<std::size_t> announce_enc_order(PartyId bidder, const std::vector<std::size_t>& honest,
                                                const BidString& own_bid) override;

private:
    std::optional<PartyId> attacker_;
};

/// Alice and the winning attacker announce a bid that differs from the
/// committed one, and the attacker discloses a Bell-pair permutation that
/// makes every verifier decode it.
class LiuFalsePermutationAdversary : public Adversary {
public:
    explicit LiuFalsePermutationAdversary(PartyId attacker) : attacker_(attacker) {}

    std::string name() const override { return "false permutation"; }
    BidString announce_winning_bid(PartyId winner, const BidString& decoded) override;
    PermutationOp announce_pair_permutation(PartyId winner, PartyId verifier, const PermutationOp& honest,
                                            const BidString& committed) override;
    bool attempted() const { return sigma_.has_value(); }

private:
    PartyId attacker_;
    std::optional<PermutationOp> sigma_;
};

/// Acts on the Liu Step 6 return path only.
class LiuDisturbanceAdversary : public Adversary {
public:
    explicit LiuDisturbanceAdversary(DisturbanceMode mode) : mode_(mode) {}

    std::string name() const override;
    bool on_transit(const Link& link, QubitSequence& qubits, Rng& rng) override;

private:
    DisturbanceMode mode_;
};

} // namespace qsba
