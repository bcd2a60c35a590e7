#include "sigshift/shifts.hpp"

#include <cmath>
#include <stdexcept>

#include "sigshift/kinetic_scanner.hpp"

namespace sigshift {

bool has_significant_regret(const GapTable& gaps, Arm a, Round s1, Round s2) {
    if (s1 < 1 || s2 > gaps.horizon() || s1 > s2)
        throw std::out_of_range("interval [" + std::to_string(s1) + ", " + std::to_string(s2) +
                                "] outside [1, " + std::to_string(gaps.horizon()) + "]");
    if (a >= gaps.arms()) throw std::out_of_range("arm index out of range");
    const double K = static_cast<double>(gaps.arms());
    return gaps.sum(a, s1, s2) >= std::sqrt(K * static_cast<double>(s2 - s1 + 1));
}

bool has_significant_regret(const EnvironmentModel& env, Arm a, Round s1, Round s2) {
    if (s1 < 1 || s2 > env.horizon() || s1 > s2)
        throw std::out_of_range("interval outside the horizon");
    double total = 0.0;
    for (Round t = s1; t <= s2; ++t) total += gap_at(env, t, a);
    return total >= std::sqrt(static_cast<double>(env.arms()) * static_cast<double>(s2 - s1 + 1));
}

namespace {

// First round s2 > start such that arm a has significant regret on some [s1, s2] with
// start <= s1 < s2; horizon + 1 if none.
Round first_bad_end_exact(const GapTable& gaps, Arm a, Round start, KineticMaxScanner& scanner) {
    scanner.clear();
    for (Round s2 = start + 1; s2 <= gaps.horizon(); ++s2) {
        const Round j = s2 - 2;  // newest admissible s1 - 1
        scanner.push(gaps.prefix(a, j), static_cast<double>(j));
        if (scanner.reaches(gaps.prefix(a, s2), static_cast<double>(s2), false)) return s2;
    }
    return gaps.horizon() + 1;
}

Round first_bad_end_dyadic(const GapTable& gaps, Arm a, Round start) {
    const double K = static_cast<double>(gaps.arms());
    for (Round s2 = start + 1; s2 <= gaps.horizon(); ++s2) {
        const double top = gaps.prefix(a, s2);
        for (Round len = 2; s2 - len + 1 >= start; len *= 2) {
            if (top - gaps.prefix(a, s2 - len) >= std::sqrt(K * static_cast<double>(len))) return s2;
        }
    }
    return gaps.horizon() + 1;
}

}  // namespace

ShiftProfile significant_shifts(const GapTable& gaps, ScanMode mode, ShiftScanStats* stats) {
    ShiftProfile profile;
    profile.horizon = gaps.horizon();
    profile.arms = gaps.arms();

    KineticMaxScanner scanner(static_cast<double>(gaps.arms()));
    Round start = 1;
    while (start < gaps.horizon()) {
        Round next = start;
        bool every_arm = true;
        for (Arm a = 0; a < gaps.arms(); ++a) {
            const Round end = mode == ScanMode::Exact ? first_bad_end_exact(gaps, a, start, scanner)
                                                      : first_bad_end_dyadic(gaps, a, start);
            if (end > gaps.horizon()) {
                every_arm = false;
                break;
            }
            next = std::max(next, end);
        }
        if (!every_arm) break;
        profile.shifts.push_back(next);
        start = next;
    }
    if (stats) stats->full_scans = scanner.full_scans();
    return profile;
}

ShiftProfile significant_shifts(const EnvironmentModel& env, ScanMode mode) {
    return significant_shifts(GapTable(env), mode);
}

double phase_rate(const ShiftProfile& profile, std::size_t arms) {
    const double K = static_cast<double>(arms);
    double total = 0.0;
    for (std::size_t i = 0; i < profile.phase_count(); ++i)
        total += std::sqrt(K * static_cast<double>(profile.phase_end(i) - profile.phase_start(i)));
    return total;
}

std::vector<std::string> check_phase_facts(const ShiftProfile& profile, const GapTable& gaps) {
    std::vector<std::string> problems;
    const double K = static_cast<double>(gaps.arms());
    for (std::size_t i = 0; i + 1 < profile.phase_count(); ++i) {
        const Round begin = profile.phase_start(i);
        const Round end = profile.phase_end(i);  // finite: a real shift
        const Round len = end - begin;
        if (len < static_cast<Round>(gaps.arms()))
            problems.push_back("phase " + std::to_string(i) + " has length " + std::to_string(len) +
                               " < K");
        const double need = std::sqrt(K / static_cast<double>(len + 1));
        for (Arm a = 0; a < gaps.arms(); ++a) {
            double peak = 0.0;
            for (Round t = begin; t <= std::min(end, gaps.horizon()); ++t) peak = std::max(peak, gaps.gap(a, t));
            if (peak < need)
                problems.push_back("phase " + std::to_string(i) + ", arm " + std::to_string(a + 1) +
                                   ": max gap " + std::to_string(peak) + " < " + std::to_string(need));
        }
    }
    return problems;
}

}  // namespace sigshift
