#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sigshift/environment.hpp"
#include "sigshift/policy_trace.hpp"
#include "sigshift/rates.hpp"
#include "sigshift/registry.hpp"

namespace sigshift {

// Cumulative dynamic regret: curve[t-1] = sum_{s<=t} delta_s(pi_s), from true means.
std::vector<double> dynamic_regret(const PolicyTrace& trace, const EnvironmentModel& env);
// Same curve sampled at the given rounds.
std::vector<double> dynamic_regret(const PolicyTrace& trace, const EnvironmentModel& env,
                                   const std::vector<Round>& checkpoints);

// `count` log-spaced rounds in [1, T], deduplicated, last = T.
std::vector<Round> default_checkpoints(Round horizon, std::size_t count = 200);
// Throws ConfigError unless non-empty, strictly increasing, inside [1, T] and ending at T.
void validate_checkpoints(const std::vector<Round>& checkpoints, Round horizon);

struct RunSettings {
    PolicySpec policy;
    std::size_t replications = 1;
    std::uint64_t master_seed = 0;
    std::vector<Round> checkpoints;  // empty: default_checkpoints(T)
    unsigned workers = 1;
    bool keep_events = false;
};

struct RegretAggregate {
    std::vector<Round> checkpoints;
    std::vector<double> mean;
    std::vector<double> std;  // sample standard deviation, 0 when R = 1
    std::size_t replications = 0;

    bool operator==(const RegretAggregate&) const = default;
};

struct RunResult {
    RegretAggregate aggregate;
    std::vector<double> final_regret;                     // per replication
    std::vector<std::vector<PolicyEvent>> events;         // per replication, when kept
};

// Replication r runs with replication_seed(master_seed, r). Replications are spread over
// `workers` threads and folded in replication order, so results do not depend on it.
RunResult run_many(const EnvironmentModel& env, const RunSettings& settings);

RegretAggregate aggregate(const std::vector<std::vector<double>>& curves, const std::vector<Round>& checkpoints);

struct ReferenceCurves {
    std::vector<Round> checkpoints;
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;  // values[curve][checkpoint]
};

// sqrt((L+1) K t) ("parametric") plus, per (beta, lambda), the minimax rate with T := t.
ReferenceCurves reference_curves(std::size_t arms, std::size_t shift_count,
                                 const std::vector<std::pair<double, double>>& beta_lambda,
                                 const std::vector<Round>& checkpoints);

// `checkpoint,mean,std`, full precision.
void export_csv(const RegretAggregate& agg, const std::filesystem::path& path);
RegretAggregate load_aggregate_csv(const std::filesystem::path& path);
void export_csv(const ReferenceCurves& curves, const std::filesystem::path& path);

}  // namespace sigshift
