#pragma once

#include <cstdint>
#include <vector>

#include "sigshift/environment.hpp"

namespace sigshift {

enum class EventKind { ReplayStart, Eviction, EpisodeRestart };
enum class EvictionScope { Local, Global };

struct PolicyEvent {
    Round round = 1;
    EventKind kind = EventKind::ReplayStart;
    std::int64_t length = 0;  // ReplayStart: replay duration m
    Arm arm = 0;              // Eviction
    EvictionScope scope = EvictionScope::Local;

    bool operator==(const PolicyEvent&) const = default;
};

struct PolicyTrace {
    std::vector<std::uint32_t> pulls;  // pulls[t-1], 0-based arm
    std::vector<double> rewards;
    std::vector<PolicyEvent> events;

    Round length() const noexcept { return static_cast<Round>(pulls.size()); }
    void reserve(Round horizon);
    void record(Arm arm, double reward);

    bool operator==(const PolicyTrace&) const = default;
};

// FNV-1a over pulls, reward bits and events; a cheap identity check for determinism tests.
std::uint64_t trace_hash(const PolicyTrace& trace);

const char* to_string(EventKind kind);
const char* to_string(EvictionScope scope);

}  // namespace sigshift
