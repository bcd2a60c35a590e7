#include "sigshift/rng.hpp"

namespace sigshift {

double keyed_uniform(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2, std::uint64_t k3) noexcept {
    constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t h = mix64(seed + gamma);
    h = mix64(h ^ (k1 + gamma));
    h = mix64(h ^ (k2 + 2 * gamma));
    h = mix64(h ^ (k3 + 3 * gamma));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace sigshift
