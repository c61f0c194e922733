#pragma once

#include <cstdint>
#include <random>

namespace qsba {

/// SplitMix64 finalizer. A bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based stream derivation.
///
///   seed(master, index) = splitmix64(splitmix64(master) + (index + 1) * 0x9E3779B97F4A7C15)
///
/// For a fixed master seed the map index -> seed is injective: the golden
/// gamma is odd, so the affine step is a bijection mod 2^64, and splitmix64
/// is a bijection. The derived seed initializes a std::mt19937_64, whose
/// output sequence is fixed by the C++ standard.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Random stream used by every simulation routine.
///
/// Only the raw 64-bit engine output is consumed; uniform reals and bounded
/// integers are derived here rather than through <random> distributions,
/// whose algorithms are implementation-defined.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng for_trial(std::uint64_t master, std::uint64_t index) {
        return Rng(derive_stream_seed(master, index));
    }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    bool coin() { return (engine_() >> 63) != 0; }
    int bit() { return coin() ? 1 : 0; }

    /// Child stream; consumes one draw from this stream.
    Rng child(std::uint64_t tag) { return Rng(derive_stream_seed(engine_(), tag)); }

private:
    std::mt19937_64 engine_;
};

} // namespace qsba
