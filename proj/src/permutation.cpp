#include "qsba/permutation.hpp"

#include <numeric>

namespace qsba {

PermutationOp::PermutationOp(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
    std::vector<bool> seen(mapping_.size(), false);
    for (std::size_t target : mapping_) {
        if (target >= mapping_.size() || seen[target]) {
            throw std::invalid_argument("permutation mapping is not a bijection");
        }
        seen[target] = true;
    }
}

PermutationOp PermutationOp::identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), std::size_t{0});
    return PermutationOp(std::move(m));
}

PermutationOp PermutationOp::random(std::size_t n, Rng& rng) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(m[i - 1], m[j]);
    }
    return PermutationOp(std::move(m));
}

PermutationOp PermutationOp::inverse() const {
    std::vector<std::size_t> inv(mapping_.size());
    for (std::size_t i = 0; i < mapping_.size(); ++i) {
        inv[mapping_[i]] = i;
    }
    return PermutationOp(std::move(inv));
}

PermutationOp PermutationOp::then(const PermutationOp& next) const {
    if (next.size() != size()) {
        throw std::invalid_argument("cannot compose permutations of different sizes");
    }
    std::vector<std::size_t> m(size());
    for (std::size_t i = 0; i < size(); ++i) {
        m[i] = next.mapping_[mapping_[i]];
    }
    return PermutationOp(std::move(m));
}

} // namespace qsba
