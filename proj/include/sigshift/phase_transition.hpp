#pragma once

#include <cstddef>
#include <vector>

#include "sigshift/environment.hpp"

namespace sigshift {

enum class SafetyClass { CertifiedSafe, NotCertified };

struct PhaseTransitionReport {
    SafetyClass verdict = SafetyClass::NotCertified;
    std::vector<double> coefficients;  // lambda_n for n = 0..floor(beta)
    double threshold = 0.0;            // sqrt(K/T)
};

// Certifies safety when max_n lambda_n <= sqrt(K/T); above the threshold no certificate
// exists, so the verdict is NotCertified rather than unsafe.
PhaseTransitionReport phase_transition_classify(const EnvironmentModel& env, double beta,
                                                std::size_t grid_size = 10000);

}  // namespace sigshift
