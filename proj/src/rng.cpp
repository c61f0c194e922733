#include "qsba/rng.hpp"

namespace qsba {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
    constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    return splitmix64(splitmix64(master) + (index + 1) * kGamma);
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Accepting x >= 2^64 mod n leaves a multiple of n values, so x % n is unbiased.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= threshold) {
            return x % n;
        }
    }
}

} // namespace qsba
