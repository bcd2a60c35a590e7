#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "sigshift/environment.hpp"
#include "sigshift/eviction.hpp"
#include "sigshift/policy_trace.hpp"
#include "sigshift/shifts.hpp"

namespace sigshift {

// |A| (Y 1{pi = a'} - Y 1{pi = a}); zero when a == a'.
double estimate_iw(std::size_t active_size, Arm chosen, double reward, Arm a_prime, Arm a);

// C2 ( sqrt(K ln T n) + K ln T ) for a window of n rounds.
double meta_threshold(Round window, double c2, std::size_t arms, Round horizon);

// True iff some entry of `pair_sums` (sum over the window of delta_hat(a', a), one per a')
// exceeds the threshold for a window of `window` rounds.
bool eviction_check_meta(std::span<const double> pair_sums, Round window, double c2, std::size_t arms,
                         Round horizon);

struct MetaConfig {
    double c2 = 1.0;
    bool dyadic_eviction = true;  // false: every window start (small T only)
    std::uint64_t seed = 0;
};

// Replay lengths 2, 4, ..., 2^ceil(log2 T).
std::vector<std::int64_t> replay_lengths(Round horizon);

// Replay indicator B_{s,m} of the episode starting at tau_hat: Bernoulli(min(1, 1/sqrt(m (s - tau_hat)))),
// drawn from a keyed generator so it can be sampled lazily.
bool replay_fires(std::uint64_t seed, Round tau_hat, Round s, std::int64_t m);

PolicyTrace run_meta(const EnvironmentModel& env, const MetaConfig& config);

struct SeConfig {
    double c5 = 2.0;
    bool dyadic_eviction = true;
    std::uint64_t seed = 0;
};

// Randomized successive elimination over [1, T]. The eviction trace records the first round
// each arm is absent from A_t (T+1 if it survives).
std::pair<PolicyTrace, EvictionTrace> run_se_safe(const EnvironmentModel& env, const SeConfig& config);

PolicyTrace run_random(const EnvironmentModel& env, std::uint64_t seed);

// Elimination restarted with the full arm set at every significant shift.
PolicyTrace run_oracle_restart(const EnvironmentModel& env, const ShiftProfile& profile, const SeConfig& config);

}  // namespace sigshift
