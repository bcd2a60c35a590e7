#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sigshift/environment.hpp"

namespace sigshift {

enum class ScanMode { Exact, Dyadic };

// Significant shifts tau_0 = 1 < tau_1 < ... < tau_L <= T; the sentinel T+1 is implicit.
struct ShiftProfile {
    std::vector<Round> shifts{1};
    Round horizon = 1;
    std::size_t arms = 1;

    std::size_t shift_count() const noexcept { return shifts.size() - 1; }
    std::size_t phase_count() const noexcept { return shifts.size(); }
    Round sentinel() const noexcept { return horizon + 1; }
    Round phase_start(std::size_t i) const { return shifts.at(i); }
    // Exclusive end: the next shift or the sentinel.
    Round phase_end(std::size_t i) const { return i + 1 < shifts.size() ? shifts[i + 1] : sentinel(); }

    bool operator==(const ShiftProfile&) const = default;
};

// sum_{t=s1}^{s2} delta_t(a) >= sqrt(K (s2 - s1 + 1)). Throws std::out_of_range on a bad interval.
bool has_significant_regret(const GapTable& gaps, Arm a, Round s1, Round s2);
bool has_significant_regret(const EnvironmentModel& env, Arm a, Round s1, Round s2);

struct ShiftScanStats {
    std::size_t full_scans = 0;  // near-tie fallbacks taken by the exact scanner
};

// Scans intervals [s1, s2] with s1 < s2 inside the current phase. Exact considers every
// start; Dyadic only lengths 2, 4, 8, ... ending at each round.
ShiftProfile significant_shifts(const GapTable& gaps, ScanMode mode, ShiftScanStats* stats = nullptr);
ShiftProfile significant_shifts(const EnvironmentModel& env, ScanMode mode);

// sum_i sqrt(K (tau_{i+1} - tau_i)), including the final phase ending at the sentinel.
double phase_rate(const ShiftProfile& profile, std::size_t arms);
inline double phase_rate(const ShiftProfile& profile) { return phase_rate(profile, profile.arms); }

// Structural facts every finite significant phase must satisfy: length >= K, and each arm
// reaches delta_t(a) >= sqrt(K / (len + 1)) for some t in [tau_i, tau_{i+1}].
// Returns one message per violation.
std::vector<std::string> check_phase_facts(const ShiftProfile& profile, const GapTable& gaps);

}  // namespace sigshift
