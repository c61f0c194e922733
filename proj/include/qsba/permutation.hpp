#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qsba/rng.hpp"

namespace qsba {

/// Bijection on positions [0, n): element i moves to position mapping[i].
class PermutationOp {
public:
    PermutationOp() = default;
    /// Throws std::invalid_argument when `mapping` is not a bijection.
    explicit PermutationOp(std::vector<std::size_t> mapping);

    static PermutationOp identity(std::size_t n);
    /// Uniform random permutation (Fisher-Yates on the caller's stream).
    static PermutationOp random(std::size_t n, Rng& rng);

    std::size_t size() const noexcept { return mapping_.size(); }
    std::size_t operator()(std::size_t i) const { return mapping_.at(i); }
    const std::vector<std::size_t>& mapping() const noexcept { return mapping_; }

    PermutationOp inverse() const;
    /// (a.then(b))(i) = b(a(i)).
    PermutationOp then(const PermutationOp& next) const;

    template <class T>
    std::vector<T> apply(const std::vector<T>& in) const {
        if (in.size() != size()) {
            throw std::invalid_argument("permutation size does not match the sequence");
        }
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) {
            out[mapping_[i]] = in[i];
        }
        return out;
    }

    friend bool operator==(const PermutationOp&, const PermutationOp&) = default;

private:
    std::vector<std::size_t> mapping_;
};

} // namespace qsba
