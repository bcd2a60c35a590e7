#include "sigshift/phase_transition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sigshift/holder.hpp"

namespace sigshift {

namespace {
constexpr double kStencilTolerance = 1e-9;
}

PhaseTransitionReport phase_transition_classify(const EnvironmentModel& env, double beta, std::size_t grid_size) {
    if (!(beta > 0.0)) throw std::invalid_argument("classify: beta must be > 0");
    PhaseTransitionReport report;
    report.threshold = std::sqrt(static_cast<double>(env.arms()) / static_cast<double>(env.horizon()));
    const int top = static_cast<int>(std::floor(beta));
    double worst = 0.0;
    for (int n = 0; n <= top; ++n) {
        report.coefficients.push_back(max_holder_coefficient(env, n, grid_size));
        worst = std::max(worst, report.coefficients.back());
    }
    report.verdict = worst <= report.threshold * (1.0 + kStencilTolerance) ? SafetyClass::CertifiedSafe
                                                                            : SafetyClass::NotCertified;
    return report;
}

}  // namespace sigshift
