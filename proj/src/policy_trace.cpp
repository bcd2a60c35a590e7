#include "sigshift/policy_trace.hpp"

#include <bit>

namespace sigshift {

void PolicyTrace::reserve(Round horizon) {
    pulls.reserve(static_cast<std::size_t>(horizon));
    rewards.reserve(static_cast<std::size_t>(horizon));
}

void PolicyTrace::record(Arm arm, double reward) {
    pulls.push_back(static_cast<std::uint32_t>(arm));
    rewards.push_back(reward);
}

namespace {

struct Fnv {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void add(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
};

}  // namespace

std::uint64_t trace_hash(const PolicyTrace& trace) {
    Fnv f;
    for (auto p : trace.pulls) f.add(p);
    for (double r : trace.rewards) f.add(std::bit_cast<std::uint64_t>(r));
    for (const auto& e : trace.events) {
        f.add(static_cast<std::uint64_t>(e.round));
        f.add(static_cast<std::uint64_t>(e.kind));
        f.add(static_cast<std::uint64_t>(e.length));
        f.add(e.arm);
        f.add(static_cast<std::uint64_t>(e.scope));
    }
    return f.h;
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::ReplayStart: return "replay";
        case EventKind::Eviction: return "eviction";
        case EventKind::EpisodeRestart: return "restart";
    }
    return "?";
}

const char* to_string(EvictionScope scope) { return scope == EvictionScope::Local ? "local" : "global"; }

}  // namespace sigshift
