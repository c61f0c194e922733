#include "qsba/auction.hpp"

#include <stdexcept>

namespace qsba {

std::string party_name(PartyId id) { return id == kAuctioneer ? std::string("Alice") : "Bob" + std::to_string(id); }

BidString::BidString(PartyId owner, std::vector<std::uint8_t> bits) : owner_(owner), bits_(std::move(bits)) {
    if (bits_.empty() || bits_.size() > 64) {
        throw std::invalid_argument("bid length must lie in [1, 64]");
    }
    for (std::uint8_t b : bits_) {
        if (b > 1) {
            throw std::invalid_argument("bid bits must be 0 or 1");
        }
    }
}

BidString BidString::from_value(PartyId owner, std::uint64_t value, int m) {
    if (m < 1 || m > 64) {
        throw std::invalid_argument("bid length must lie in [1, 64]");
    }
    if (m < 64 && (value >> m) != 0) {
        throw std::invalid_argument("bid value does not fit in m bits");
    }
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((value >> (m - 1 - i)) & 1U);
    }
    return BidString(owner, std::move(bits));
}

BidString BidString::random(PartyId owner, int m, Rng& rng) {
    if (m < 1 || m > 64) {
        throw std::invalid_argument("bid length must lie in [1, 64]");
    }
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(m));
    for (auto& b : bits) {
        b = static_cast<std::uint8_t>(rng.bit());
    }
    return BidString(owner, std::move(bits));
}

BidString BidString::parse(PartyId owner, std::string_view text) {
    std::vector<std::uint8_t> bits;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bid string must contain only 0 and 1");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BidString(owner, std::move(bits));
}

std::uint64_t BidString::value() const {
    std::uint64_t v = 0;
    for (std::uint8_t b : bits_) {
        v = (v << 1) | b;
    }
    return v;
}

std::string BidString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (std::uint8_t b : bits_) {
        s.push_back(static_cast<char>('0' + b));
    }
    return s;
}

std::vector<int> BidString::two_bit_blocks() const {
    std::vector<std::uint8_t> padded;
    if (bits_.size() % 2 == 1) {
        padded.push_back(0);
    }
    padded.insert(padded.end(), bits_.begin(), bits_.end());
    std::vector<int> blocks(padded.size() / 2);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        blocks[i] = 2 * padded[2 * i] + padded[2 * i + 1];
    }
    return blocks;
}

BidString BidString::from_two_bit_blocks(PartyId owner, std::span<const int> blocks, int m) {
    if (m < 1 || static_cast<std::size_t>((m + 1) / 2) != blocks.size()) {
        throw std::invalid_argument("block count does not match the bid length");
    }
    std::vector<std::uint8_t> padded;
    for (int block : blocks) {
        if (block < 0 || block > 3) {
            throw std::invalid_argument("two-bit block out of range");
        }
        padded.push_back(static_cast<std::uint8_t>(block >> 1));
        padded.push_back(static_cast<std::uint8_t>(block & 1));
    }
    if (m % 2 == 1) {
        if (padded.front() != 0) {
            throw std::invalid_argument("pad bit of an odd-length bid must be 0");
        }
        padded.erase(padded.begin());
    }
    return BidString(owner, std::move(padded));
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::fair: return "fair";
    case Verdict::unfair: return "unfair";
    case Verdict::aborted_eavesdropping: return "aborted-eavesdropping";
    case Verdict::void_session: return "void";
    }
    return "?";
}

std::size_t select_winner(std::span<const BidString> bids) {
    if (bids.empty()) {
        throw std::invalid_argument("no bids to compare");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < bids.size(); ++i) {
        const bool higher = bids[i].value() > bids[best].value();
        const bool tie_lower_id = bids[i].value() == bids[best].value() && bids[i].owner() < bids[best].owner();
        if (higher || tie_lower_id) {
            best = i;
        }
    }
    return best;
}

} // namespace qsba
