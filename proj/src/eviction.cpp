#include "sigshift/eviction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sigshift/kinetic_scanner.hpp"

namespace sigshift {

ArmsetTrajectory::ArmsetTrajectory(std::vector<ArmsetRun> runs, Round horizon, bool allow_empty)
    : runs_(std::move(runs)), horizon_(horizon) {
    if (runs_.empty() || runs_.front().from != 1)
        throw std::invalid_argument("armset trajectory must start at round 1");
    for (std::size_t i = 0; i < runs_.size(); ++i) {
        auto& run = runs_[i];
        std::sort(run.set.begin(), run.set.end());
        if (run.from < 1 || run.from > horizon_ + 1)
            throw std::invalid_argument("armset run starts outside the horizon");
        if (run.set.empty() && !allow_empty) throw std::invalid_argument("armset G_t must be non-empty");
        if (i > 0) {
            if (run.from <= runs_[i - 1].from) throw std::invalid_argument("armset runs must be ordered");
            if (!std::includes(runs_[i - 1].set.begin(), runs_[i - 1].set.end(), run.set.begin(), run.set.end()))
                throw std::invalid_argument("armset trajectory must be shrinking");
        }
    }
}

ArmsetTrajectory ArmsetTrajectory::full(std::size_t arms, Round horizon) {
    ArmsetRun run{1, {}};
    for (Arm a = 0; a < arms; ++a) run.set.push_back(a);
    return ArmsetTrajectory({run}, horizon);
}

const std::vector<Arm>& ArmsetTrajectory::at(Round t) const {
    auto it = std::upper_bound(runs_.begin(), runs_.end(), t,
                               [](Round value, const ArmsetRun& run) { return value < run.from; });
    if (it == runs_.begin()) throw std::out_of_range("round before trajectory start");
    return std::prev(it)->set;
}

EvictionTrace eviction_times(const GapTable& gaps, double c2, ScanMode mode) {
    if (!(c2 > 0.0)) throw std::invalid_argument("eviction_times: C2 must be > 0");
    const std::size_t K = gaps.arms();
    const Round T = gaps.horizon();
    const double log_t = std::log(static_cast<double>(T));
    const auto stride = static_cast<std::size_t>(T) + 1;

    std::vector<char> alive(K, 1);
    std::size_t alive_count = K;
    std::vector<double> weighted(K * stride, 0.0);  // W(a, t)
    std::vector<double> variance(stride, 0.0);      // V(t)
    std::vector<KineticMaxScanner> scanners;
    if (mode == ScanMode::Exact) scanners.assign(K, KineticMaxScanner(c2 * c2));

    EvictionTrace trace;
    trace.c2 = c2;
    trace.horizon = T;
    std::vector<ArmsetRun> runs;
    runs.push_back({1, {}});
    for (Arm a = 0; a < K; ++a) runs.back().set.push_back(a);

    auto W = [&](Arm a, Round t) -> double& { return weighted[a * stride + static_cast<std::size_t>(t)]; };

    for (Round t = 1; t <= T && alive_count > 0; ++t) {
        if (mode == ScanMode::Exact)
            for (Arm a = 0; a < K; ++a)
                if (alive[a]) scanners[a].push(W(a, t - 1), variance[t - 1]);

        while (true) {
            const double weight = 1.0 / static_cast<double>(alive_count);
            variance[t] = variance[t - 1] + log_t * weight;
            for (Arm a = 0; a < K; ++a) W(a, t) = W(a, t - 1) + gaps.gap(a, t) * weight;

            std::vector<Arm> violators;
            for (Arm a = 0; a < K; ++a) {
                if (!alive[a]) continue;
                bool crossed = false;
                if (mode == ScanMode::Exact) {
                    crossed = scanners[a].reaches(W(a, t), variance[t], true);
                } else {
                    for (Round len = 1; len <= t && !crossed; len *= 2)
                        crossed = W(a, t) - W(a, t - len) > c2 * std::sqrt(variance[t] - variance[t - len]);
                }
                if (crossed) violators.push_back(a);
            }
            if (violators.empty()) break;

            for (Arm a : violators) {
                alive[a] = 0;
                --alive_count;
                trace.times.push_back(t);
                trace.order.push_back(a);
            }
            ArmsetRun run{t, {}};
            for (Arm a = 0; a < K; ++a)
                if (alive[a]) run.set.push_back(a);
            if (runs.back().from == t) runs.back() = run;
            else runs.push_back(run);
            if (alive_count == 0) break;
        }
    }
    for (Arm a = 0; a < K; ++a) {
        if (alive[a]) {
            trace.times.push_back(T + 1);
            trace.order.push_back(a);
        }
    }
    trace.armsets = ArmsetTrajectory(std::move(runs), T, true);
    return trace;
}

double gap_dependent_rate(const GapTable& gaps, const EvictionTrace& trace) {
    if (trace.horizon != gaps.horizon()) throw std::invalid_argument("eviction trace horizon mismatch");
    double total = 0.0;
    for (Round t = 1; t <= gaps.horizon(); ++t) {
        const auto& set = trace.armsets.at(t);
        if (set.empty()) break;
        double sum = 0.0;
        for (Arm a : set) sum += gaps.gap(a, t);
        total += sum / static_cast<double>(set.size());
    }
    return total;
}

SafeArmReport safe_arm_check(const GapTable& gaps, const ArmsetTrajectory& trajectory, double c3,
                             bool exhaustive) {
    if (!(c3 > 0.0)) throw std::invalid_argument("safe_arm_check: C3 must be > 0");
    if (trajectory.horizon() != gaps.horizon()) throw std::invalid_argument("trajectory horizon mismatch");
    const std::size_t K = gaps.arms();
    const Round T = gaps.horizon();
    const double log_t = std::log(static_cast<double>(T));
    const auto n = static_cast<std::size_t>(T) + 1;

    std::vector<double> inv(n, 0.0);
    for (Round t = 1; t <= T; ++t) inv[t] = 1.0 / static_cast<double>(trajectory.at(t).size());
    std::vector<double> variance(n, 0.0);
    for (Round t = 1; t <= T; ++t) variance[t] = variance[t - 1] + log_t * inv[t];

    SafeArmReport report;
    report.arm_worst_ratio.assign(K, 0.0);
    std::vector<double> w(n, 0.0);
    for (Arm a = 0; a < K; ++a) {
        for (Round t = 1; t <= T; ++t) w[t] = w[t - 1] + gaps.gap(a, t) * inv[t];
        double worst = 0.0;
        auto consider = [&](Round s1, Round s2) {
            const double lhs = w[s2] - w[s1 - 1];
            if (lhs <= 0.0) return;
            const double rhs = c3 * std::sqrt(variance[s2] - variance[s1 - 1]);
            worst = std::max(worst, rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity());
        };
        for (Round s2 = 1; s2 <= T; ++s2) {
            if (exhaustive) {
                for (Round s1 = 1; s1 <= s2; ++s1) consider(s1, s2);
            } else {
                for (Round len = 1; len <= s2; len *= 2) consider(s2 - len + 1, s2);
            }
        }
        report.arm_worst_ratio[a] = worst;
        report.worst_violation = std::max(report.worst_violation, worst);
        if (worst <= 1.0) report.safe_arms.push_back(a);
    }
    return report;
}

SafeArmReport safe_arm_check(const GapTable& gaps, double c3, bool exhaustive) {
    return safe_arm_check(gaps, ArmsetTrajectory::full(gaps.arms(), gaps.horizon()), c3, exhaustive);
}

}  // namespace sigshift
