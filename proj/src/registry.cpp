#include "sigshift/registry.hpp"

#include <memory>

#include "sigshift/errors.hpp"
#include "sigshift/policies.hpp"

namespace sigshift {

const std::vector<std::string>& policy_names() {
    static const std::vector<std::string> names{"meta", "se", "rand", "oracle-restart"};
    return names;
}

PolicyRunner prepare_policy(const PolicySpec& spec, const EnvironmentModel& env) {
    if (spec.name == "meta") {
        if (!(spec.c2 > 0.0)) throw ConfigError("policy meta: C2 must be > 0");
        return [env, spec](std::uint64_t seed) {
            return run_meta(env, MetaConfig{spec.c2, spec.dyadic_eviction, seed});
        };
    }
    if (spec.name == "se" || spec.name == "oracle-restart") {
        if (!(spec.c5 > 0.0)) throw ConfigError("policy " + spec.name + ": C5 must be > 0");
        if (spec.name == "se")
            return [env, spec](std::uint64_t seed) {
                return run_se_safe(env, SeConfig{spec.c5, spec.dyadic_eviction, seed}).first;
            };
        auto profile = std::make_shared<const ShiftProfile>(significant_shifts(env, spec.shift_mode));
        return [env, spec, profile](std::uint64_t seed) {
            return run_oracle_restart(env, *profile, SeConfig{spec.c5, spec.dyadic_eviction, seed});
        };
    }
    if (spec.name == "rand") return [env](std::uint64_t seed) { return run_random(env, seed); };
    throw ConfigError("unknown policy '" + spec.name + "' (known: meta, se, rand, oracle-restart)");
}

}  // namespace sigshift
