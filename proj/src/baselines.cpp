#include "sigshift/policies.hpp"

namespace sigshift {

PolicyTrace run_random(const EnvironmentModel& env, std::uint64_t seed) {
    Rng rng(seed);
    PolicyTrace trace;
    trace.reserve(env.horizon());
    std::uniform_int_distribution<std::size_t> pick(0, env.arms() - 1);
    for (Round t = 1; t <= env.horizon(); ++t) {
        const Arm a = pick(rng);
        trace.record(a, sample_reward(env, t, a, rng));
    }
    return trace;
}

}  // namespace sigshift
