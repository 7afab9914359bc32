#pragma once

#include <cstdint>
#include <random>

namespace sasrate::detail {

// Engine keyed by (seed, key); the same pair always yields the same stream.
inline std::mt19937_64 keyed_rng(std::uint64_t seed, std::uint64_t key) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    return std::mt19937_64(seq);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double unit_draw(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

} // namespace sasrate::detail
