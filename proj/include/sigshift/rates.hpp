#pragma once

#include <cstddef>

#include "sigshift/environment.hpp"
#include "sigshift/shifts.hpp"

namespace sigshift {

struct RateParams {
    double beta = 1.0;
    double lambda = 1.0;
    std::size_t arms = 2;
    double horizon = 1.0;

    void validate() const;
};

// T^{(b+1)/(2b+1)} lambda^{1/(2b+1)} K^{b/(2b+1)}
double smooth_rate_term(const RateParams& p);

// min{ sqrt(KT) + smooth_rate_term, T }
double minimax_rate(const RateParams& p);

// phase_rate / ( sqrt(b+1) (sqrt(KT) + smooth_rate_term) ), no constant folded in.
double upper_bound_ratio(const ShiftProfile& profile, const RateParams& p);

// sum over segments of sum_{a: gap > 0} ln(T) / gap
double restarting_oracle_rate(const PiecewiseSpec& spec, Round horizon);

}  // namespace sigshift
