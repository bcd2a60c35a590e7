#pragma once

#include <cstdint>

namespace sigshift {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed of replication r: mix64(master + (r + 1) * golden gamma).
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t r) noexcept {
    return mix64(master + (r + 1) * 0x9E3779B97F4A7C15ULL);
}

// Counter-based draw: a fixed function of (seed, keys), uniform on [0, 1).
double keyed_uniform(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2, std::uint64_t k3) noexcept;

}  // namespace sigshift
