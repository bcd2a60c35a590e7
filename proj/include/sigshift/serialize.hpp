#pragma once

#include <filesystem>
#include <vector>

#include "sigshift/config.hpp"
#include "sigshift/eviction.hpp"
#include "sigshift/harness.hpp"
#include "sigshift/holder.hpp"
#include "sigshift/phase_transition.hpp"
#include "sigshift/policy_trace.hpp"
#include "sigshift/shifts.hpp"

namespace sigshift {

// Arms are written 1-based.
Json to_json(const ShiftProfile& profile);               // {"shifts","T","K"}
ShiftProfile shift_profile_from_json(const Json& doc);
Json to_json(const EvictionTrace& trace);                // {"times","armsets":[{"from","set"}],"c2"}
Json to_json(const RegretAggregate& agg);                // {"checkpoints","mean","std","R"}
Json to_json(const HolderReport& report);
Json to_json(const PhaseTransitionReport& report);
Json to_json(const PolicyEvent& event);

// Pretty-printed with a trailing newline.
void write_json(const Json& doc, const std::filesystem::path& path);
std::string dump(const Json& doc);

// `round,arm,reward` plus one JSON object per event in the sidecar.
void write_trace(const PolicyTrace& trace, const std::filesystem::path& csv_path,
                 const std::filesystem::path& events_path);
// events.jsonl of a replicated run: each line carries its replication index.
void write_events_jsonl(const std::vector<std::vector<PolicyEvent>>& events, const std::filesystem::path& path);

}  // namespace sigshift
