#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sigshift/environment.hpp"

namespace sigshift {

// n-th derivative of f_a(x) = delta_{xT}(a) on a uniform grid over [0,1], by the
// binomial central stencil. Grid spacing is max(1/T, 1/grid_size).
struct DerivativeSamples {
    std::vector<double> position;  // stencil centres in normalized time
    std::vector<double> value;
};

DerivativeSamples gap_derivative(const EnvironmentModel& env, Arm a, int order, std::size_t grid_size);

// sup_x |f_a^(n)(x)| over the grid.
double holder_coefficient(const EnvironmentModel& env, Arm a, int order, std::size_t grid_size);

// max over arms of holder_coefficient.
double max_holder_coefficient(const EnvironmentModel& env, int order, std::size_t grid_size);

struct HolderReport {
    bool pass = true;
    double worst_ratio = 0.0;
    double x = 0.0;
    double x_prime = 0.0;
    Arm arm = 0;
};

// Checks |f^(m)(x) - f^(m)(x')| <= lambda (1 + tol) |x - x'|^(beta - m), m = floor(beta),
// for every arm's gap function. Pairs checked: all grid neighbours within a window,
// `sample_pairs` random pairs, and every pair touching the extreme derivative values.
HolderReport verify_holder(const EnvironmentModel& env, double beta, double lambda,
                           std::size_t sample_pairs, double tol, std::size_t grid_size = 10000,
                           std::uint64_t seed = 0x5eedULL);

}  // namespace sigshift
