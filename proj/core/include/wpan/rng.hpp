#pragma once

// Portable, seedable random streams for the contention simulator.
//
// SplitMix64 (Steele, Lea & Flood 2014) expands and mixes seeds;
// xoshiro256** (Blackman & Vigna 2018) produces the stream. Bounded
// integers use rejection sampling, so a seed yields the same sequence on
// every platform and standard library.

#include <cstdint>

namespace wpan {

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and two indices:
///   s = base; s = splitmix64(s) ^ (a * 0xD1B54A32D192ED03);
///   s = splitmix64(s) ^ (b * 0xAEF17502108EF2D9); return splitmix64(s).
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept {
    std::uint64_t s = base;
    s = splitmix64(s) ^ (a * 0xD1B54A32D192ED03ULL);
    s = splitmix64(s) ^ (b * 0xAEF17502108EF2D9ULL);
    return splitmix64(s);
}

class Xoshiro256 {
public:
    explicit constexpr Xoshiro256(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    constexpr std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform integer in [0, bound); bound must be > 0.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);  // largest multiple of bound
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4]{};
};

}  // namespace wpan
