#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, fish, step, lane), so results do not depend on which thread or in
// which order a loop body runs. That property is what makes parallel
// simulation bit-identical to sequential execution.

#include <cstdint>

namespace fsb {

// splitmix64 finalizer; full-avalanche 64-bit bijection.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t fold_in(std::uint64_t h, std::uint64_t word) {
    return mix64(h ^ (word + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
}

// Step value reserved for initialization draws.
inline constexpr std::uint64_t kInitStep = ~0ull;

struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t fish = 0;
    std::uint64_t step = 0;

    std::uint64_t bits(std::uint64_t lane) const {
        return fold_in(fold_in(fold_in(seed, fish), step), lane);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double unit(std::uint64_t lane) const {
        return static_cast<double>(bits(lane) >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi); lo itself is reachable.
    double uniform(std::uint64_t lane, double lo, double hi) const {
        return lo + unit(lane) * (hi - lo);
    }
};

}  // namespace fsb
