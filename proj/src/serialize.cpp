#include "sigshift/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include "sigshift/errors.hpp"
#include "sigshift/format.hpp"

namespace sigshift {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path) {
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

Json to_json(const ShiftProfile& profile) {
    return Json{{"shifts", profile.shifts}, {"T", profile.horizon}, {"K", profile.arms}};
}

ShiftProfile shift_profile_from_json(const Json& doc) {
    try {
        ShiftProfile p;
        p.shifts = doc.at("shifts").get<std::vector<Round>>();
        p.horizon = doc.at("T").get<Round>();
        p.arms = doc.at("K").get<std::size_t>();
        if (p.shifts.empty() || p.shifts.front() != 1) throw ParseError("shift profile must start at round 1");
        return p;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("shift profile: ") + e.what());
    }
}

Json to_json(const EvictionTrace& trace) {
    Json armsets = Json::array();
    for (const auto& run : trace.armsets.runs()) {
        Json set = Json::array();
        for (Arm a : run.set) set.push_back(a + 1);
        armsets.push_back(Json{{"from", run.from}, {"set", set}});
    }
    return Json{{"times", trace.times}, {"armsets", armsets}, {"c2", trace.c2}};
}

Json to_json(const RegretAggregate& agg) {
    return Json{{"checkpoints", agg.checkpoints}, {"mean", agg.mean}, {"std", agg.std}, {"R", agg.replications}};
}

Json to_json(const HolderReport& report) {
    return Json{{"pass", report.pass},
                {"worstRatio", report.worst_ratio},
                {"witness", Json{{"x", report.x}, {"x_prime", report.x_prime}, {"arm", report.arm + 1}}}};
}

Json to_json(const PhaseTransitionReport& report) {
    return Json{{"verdict", report.verdict == SafetyClass::CertifiedSafe ? "CertifiedSafe" : "NotCertified"},
                {"lambda", report.coefficients},
                {"threshold", report.threshold}};
}

Json to_json(const PolicyEvent& event) {
    Json out{{"round", event.round}, {"kind", to_string(event.kind)}};
    if (event.kind == EventKind::ReplayStart) out["m"] = event.length;
    if (event.kind == EventKind::Eviction) {
        out["arm"] = event.arm + 1;
        out["scope"] = to_string(event.scope);
    }
    return out;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_json(const Json& doc, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << dump(doc);
    check_written(out, path);
}

void write_trace(const PolicyTrace& trace, const std::filesystem::path& csv_path,
                 const std::filesystem::path& events_path) {
    {
        auto out = open_for_write(csv_path);
        out << "round,arm,reward\n";
        for (std::size_t i = 0; i < trace.pulls.size(); ++i)
            out << i + 1 << ',' << trace.pulls[i] + 1 << ',' << format_double(trace.rewards[i]) << '\n';
        check_written(out, csv_path);
    }
    auto out = open_for_write(events_path);
    for (const auto& e : trace.events) out << to_json(e).dump() << '\n';
    check_written(out, events_path);
}

void write_events_jsonl(const std::vector<std::vector<PolicyEvent>>& events, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (std::size_t r = 0; r < events.size(); ++r) {
        for (const auto& e : events[r]) {
            Json line{{"replication", r}};
            line.update(to_json(e));
            out << line.dump() << '\n';
        }
    }
    check_written(out, path);
}

}  // namespace sigshift
