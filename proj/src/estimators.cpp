#include "sigshift/policies.hpp"

#include <cmath>

namespace sigshift {

double estimate_iw(std::size_t active_size, Arm chosen, double reward, Arm a_prime, Arm a) {
    if (a == a_prime) return 0.0;
    const double scale = static_cast<double>(active_size);
    if (chosen == a_prime) return scale * reward;
    if (chosen == a) return -scale * reward;
    return 0.0;
}

double meta_threshold(Round window, double c2, std::size_t arms, Round horizon) {
    const double k_log = static_cast<double>(arms) * std::log(static_cast<double>(horizon));
    return c2 * (std::sqrt(k_log * static_cast<double>(window)) + k_log);
}

bool eviction_check_meta(std::span<const double> pair_sums, Round window, double c2, std::size_t arms,
                         Round horizon) {
    const double threshold = meta_threshold(window, c2, arms, horizon);
    for (double v : pair_sums)
        if (v > threshold) return true;
    return false;
}

}  // namespace sigshift
