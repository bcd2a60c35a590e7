#include "sigshift/rates.hpp"

#include <algorithm>
#include <cmath>

#include "sigshift/errors.hpp"

namespace sigshift {

void RateParams::validate() const {
    if (!(beta > 0.0) || !(lambda > 0.0) || !(horizon > 0.0) || arms < 1)
        throw ConfigError("rate parameters must be positive");
}

double smooth_rate_term(const RateParams& p) {
    const double e = 2.0 * p.beta + 1.0;
    const double K = static_cast<double>(p.arms);
    return std::pow(p.horizon, (p.beta + 1.0) / e) * std::pow(p.lambda, 1.0 / e) * std::pow(K, p.beta / e);
}

double minimax_rate(const RateParams& p) {
    p.validate();
    const double K = static_cast<double>(p.arms);
    return std::min(std::sqrt(K * p.horizon) + smooth_rate_term(p), p.horizon);
}

double upper_bound_ratio(const ShiftProfile& profile, const RateParams& p) {
    p.validate();
    const double K = static_cast<double>(p.arms);
    const double rhs = std::sqrt(p.beta + 1.0) * (std::sqrt(K * p.horizon) + smooth_rate_term(p));
    return phase_rate(profile, p.arms) / rhs;
}

double restarting_oracle_rate(const PiecewiseSpec& spec, Round horizon) {
    const double log_t = std::log(static_cast<double>(horizon));
    double total = 0.0;
    for (const auto& segment : spec.segments)
        for (double gap : segment.gaps)
            if (gap > 0.0) total += log_t / gap;
    return total;
}

}  // namespace sigshift
