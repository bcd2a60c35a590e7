#pragma once

#include <cstddef>
#include <vector>

#include "sigshift/environment.hpp"
#include "sigshift/shifts.hpp"

namespace sigshift {

struct ArmsetRun {
    Round from = 1;
    std::vector<Arm> set;  // ascending

    bool operator==(const ArmsetRun&) const = default;
};

// Run-length encoded shrinking sequence S_1 >= S_2 >= ... >= S_T.
class ArmsetTrajectory {
public:
    ArmsetTrajectory() = default;
    // Validates: first run starts at 1, starts strictly increase, each set is a subset of
    // its predecessor. Empty sets are allowed only when `allow_empty`.
    ArmsetTrajectory(std::vector<ArmsetRun> runs, Round horizon, bool allow_empty = false);

    static ArmsetTrajectory full(std::size_t arms, Round horizon);

    const std::vector<Arm>& at(Round t) const;
    const std::vector<ArmsetRun>& runs() const noexcept { return runs_; }
    Round horizon() const noexcept { return horizon_; }

    bool operator==(const ArmsetTrajectory&) const = default;

private:
    std::vector<ArmsetRun> runs_;
    Round horizon_ = 0;
};

struct EvictionTrace {
    std::vector<Round> times;  // t_1 <= ... <= t_K, horizon + 1 when never evicted
    std::vector<Arm> order;    // arm whose eviction time is times[i]
    ArmsetTrajectory armsets;
    double c2 = 1.0;
    Round horizon = 0;
};

// Greedy forward construction of eviction times: arm a leaves the safe armset at the
// first round t where some [s1, t] has
//   sum delta_s(a)/|S_s| > c2 sqrt( sum ln(T)/|S_s| ).
// Intervals start anywhere from round 1. Arms crossing together share an eviction time;
// the round's weights are recomputed with the shrunken set until no arm crosses.
EvictionTrace eviction_times(const GapTable& gaps, double c2, ScanMode mode);

// sum_i sum_{t=t_{i-1}}^{t_i - 1} E_{a ~ Unif(S_t)} delta_t(a)
double gap_dependent_rate(const GapTable& gaps, const EvictionTrace& trace);

struct SafeArmReport {
    std::vector<Arm> safe_arms;
    double worst_violation = 0.0;         // largest LHS/RHS ratio over all arms and intervals
    std::vector<double> arm_worst_ratio;  // per arm
};

// For each arm, sup over intervals of  (sum delta/|G|) / (c3 sqrt(sum ln T/|G|)); an arm is
// safe when that stays <= 1. Exhaustive over all intervals, or dyadic lengths only.
SafeArmReport safe_arm_check(const GapTable& gaps, const ArmsetTrajectory& trajectory, double c3,
                             bool exhaustive = true);
SafeArmReport safe_arm_check(const GapTable& gaps, double c3 = 1.0, bool exhaustive = true);

}  // namespace sigshift
