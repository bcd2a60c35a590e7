#include <cmath>
#include <stdexcept>

#include "sigshift/policies.hpp"

namespace sigshift {

namespace {

struct SegmentOutcome {
    std::vector<Round> times;
    std::vector<Arm> order;
    std::vector<ArmsetRun> runs;
};

// Elimination over rounds [from, to] with a fresh arm set. W(b) accumulates Y 1{pi=b}/|A_s|
// and V accumulates ln(T)/|A_s|, both from `from`; an arm is evicted after round t when
// max_{a'} (W(a') - W(a)) >= c5 sqrt(V) over a window ending at t.
SegmentOutcome eliminate(const EnvironmentModel& env, Round from, Round to, const SeConfig& cfg, Rng& rng,
                         PolicyTrace& trace) {
    const std::size_t K = env.arms();
    const double log_t = std::log(static_cast<double>(env.horizon()));
    const auto len = static_cast<std::size_t>(to - from + 1);
    const std::size_t stride = len + 1;
    std::vector<double> w(K * stride, 0.0);
    std::vector<double> v(stride, 0.0);
    std::vector<char> active(K, 1);
    std::size_t count = K;
    std::vector<double> sums(K);
    std::vector<char> hit(K);

    SegmentOutcome out;
    out.runs.push_back({from, {}});
    for (Arm a = 0; a < K; ++a) out.runs.back().set.push_back(a);

    for (Round t = from; t <= to; ++t) {
        std::uniform_int_distribution<std::size_t> pick(0, count - 1);
        std::size_t k = pick(rng);
        Arm arm = 0;
        for (Arm a = 0; a < K; ++a) {
            if (!active[a]) continue;
            if (k-- == 0) {
                arm = a;
                break;
            }
        }
        const double y = sample_reward(env, t, arm, rng);
        trace.record(arm, y);

        const auto i = static_cast<std::size_t>(t - from) + 1;
        const double inv = 1.0 / static_cast<double>(count);
        for (Arm a = 0; a < K; ++a) w[a * stride + i] = w[a * stride + i - 1] + (a == arm ? y * inv : 0.0);
        v[i] = v[i - 1] + log_t * inv;
        if (K == 1) continue;

        std::fill(hit.begin(), hit.end(), 0);
        auto check = [&](std::size_t j) {  // window of local indices [j, i]
            const double bound = cfg.c5 * std::sqrt(v[i] - v[j - 1]);
            for (Arm a = 0; a < K; ++a) sums[a] = w[a * stride + i] - w[a * stride + j - 1];
            for (Arm a = 0; a < K; ++a) {
                if (!active[a] || hit[a]) continue;
                for (Arm b = 0; b < K; ++b) {
                    if (b != a && sums[b] - sums[a] >= bound) {
                        hit[a] = 1;
                        break;
                    }
                }
            }
        };
        if (cfg.dyadic_eviction) {
            for (std::size_t n = 1; n <= i; n *= 2) check(i - n + 1);
        } else {
            for (std::size_t j = i; j >= 1; --j) check(j);
        }

        std::size_t hits = 0;
        for (Arm a = 0; a < K; ++a) hits += hit[a];
        // Only reachable with a zero threshold (T = 1): keep the set rather than empty it.
        if (hits == 0 || hits == count) continue;
        ArmsetRun run{t + 1, {}};
        for (Arm a = 0; a < K; ++a) {
            if (hit[a]) {
                active[a] = 0;
                --count;
                out.times.push_back(t + 1);
                out.order.push_back(a);
                trace.events.push_back({t + 1, EventKind::Eviction, 0, a, EvictionScope::Local});
            }
            if (active[a]) run.set.push_back(a);
        }
        out.runs.push_back(std::move(run));
    }
    for (Arm a = 0; a < K; ++a) {
        if (active[a]) {
            out.times.push_back(to + 1);
            out.order.push_back(a);
        }
    }
    return out;
}

void check_c5(const SeConfig& config) {
    if (!(config.c5 > 0.0)) throw std::invalid_argument("se: C5 must be > 0");
}

}  // namespace

std::pair<PolicyTrace, EvictionTrace> run_se_safe(const EnvironmentModel& env, const SeConfig& config) {
    check_c5(config);
    Rng rng(config.seed);
    PolicyTrace trace;
    trace.reserve(env.horizon());
    auto outcome = eliminate(env, 1, env.horizon(), config, rng, trace);

    EvictionTrace evictions;
    evictions.times = std::move(outcome.times);
    evictions.order = std::move(outcome.order);
    evictions.armsets = ArmsetTrajectory(std::move(outcome.runs), env.horizon());
    evictions.c2 = config.c5;
    evictions.horizon = env.horizon();
    return {std::move(trace), std::move(evictions)};
}

PolicyTrace run_oracle_restart(const EnvironmentModel& env, const ShiftProfile& profile, const SeConfig& config) {
    check_c5(config);
    if (profile.horizon != env.horizon() || profile.arms != env.arms())
        throw std::invalid_argument("oracle-restart: shift profile does not match the environment");
    Rng rng(config.seed);
    PolicyTrace trace;
    trace.reserve(env.horizon());
    for (std::size_t i = 0; i < profile.phase_count(); ++i) {
        const Round from = profile.phase_start(i);
        if (i > 0) trace.events.push_back({from, EventKind::EpisodeRestart});
        eliminate(env, from, profile.phase_end(i) - 1, config, rng, trace);
    }
    return trace;
}

}  // namespace sigshift
