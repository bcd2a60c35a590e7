#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sigshift/environment.hpp"
#include "sigshift/policy_trace.hpp"
#include "sigshift/shifts.hpp"

namespace sigshift {

struct PolicySpec {
    std::string name = "meta";  // meta | se | rand | oracle-restart
    double c2 = 1.0;            // meta
    double c5 = 2.0;            // se, oracle-restart
    bool dyadic_eviction = true;
    ScanMode shift_mode = ScanMode::Dyadic;  // oracle-restart: how the profile is computed
};

// One replication for a given seed.
using PolicyRunner = std::function<PolicyTrace(std::uint64_t seed)>;

const std::vector<std::string>& policy_names();

// Binds a policy to an environment, doing any per-environment precomputation once
// (the shift profile for oracle-restart). Throws ConfigError for unknown names.
PolicyRunner prepare_policy(const PolicySpec& spec, const EnvironmentModel& env);

}  // namespace sigshift
