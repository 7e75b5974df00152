#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace nasinit {

// std::mt19937_64's output sequence is fixed by the standard, but the
// std::*_distribution adaptors are not. Everything below draws through these
// helpers so seeded results are identical across standard libraries.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used for seed derivation and value hashing.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from (master, index).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

/// 64-bit FNV-1a. Stable across platforms and process runs.
constexpr std::uint64_t fnv1a(std::string_view bytes,
                              std::uint64_t h = 0xCBF29CE484222325ULL) noexcept {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Uniform integer in [0, n). Rejection sampling, no modulo bias. n must be > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0; }

/// Standard normal via Box-Muller (one value per call, second discarded).
double standard_normal(Rng& rng);

} // namespace nasinit
