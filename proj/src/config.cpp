#include "sigshift/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <string>

#include "sigshift/errors.hpp"

namespace sigshift {

namespace {

void allow_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
T get_or(const Json& obj, const char* key, T fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    return obj[key].get<T>();
}

Json resolve_noise(const Json& noise) {
    if (noise.is_null()) return Json{{"kind", "deterministic"}};
    Json spec = noise.is_string() ? Json{{"kind", noise}} : noise;
    allow_keys(spec, {"kind", "variance", "clip"}, "noise");
    const auto kind = get_or<std::string>(spec, "kind", "deterministic");
    if (kind == "gaussian") {
        const double variance = get_or(spec, "variance", 0.001);
        if (!(variance >= 0.0)) throw ConfigError("noise: variance must be >= 0");
        return Json{{"kind", kind}, {"variance", variance}, {"clip", get_or(spec, "clip", false)}};
    }
    if (kind == "bernoulli" || kind == "deterministic") return Json{{"kind", kind}};
    throw ConfigError("noise: unknown kind '" + kind + "' (bernoulli, gaussian, deterministic)");
}

Round read_horizon(const Json& block, std::optional<Round> horizon, const std::string& where) {
    const Round T = horizon ? *horizon : get_or<Round>(block, "T", 0);
    if (T < 1) throw ConfigError(where + ": T must be >= 1");
    return T;
}

Json resolve_unchecked(const Json& block, std::optional<Round> horizon) {
    if (!block.is_object()) throw ConfigError("env: expected a JSON object");
    const auto kind = get_or<std::string>(block, "kind", "");
    const Json noise = resolve_noise(block.contains("noise") ? block["noise"] : Json());
    if (kind == "trig") {
        allow_keys(block, {"kind", "A", "nu", "phi", "T", "reference_horizon", "noise"}, "env(trig)");
        for (const char* key : {"A", "nu", "phi"})
            if (!block.contains(key)) throw ConfigError(std::string("env(trig): missing '") + key + "'");
        Json out{{"kind", kind},
                 {"A", block["A"].get<double>()},
                 {"nu", block["nu"].get<double>()},
                 {"phi", block["phi"].get<double>()},
                 {"T", read_horizon(block, horizon, "env(trig)")}};
        out["reference_horizon"] =
            block.contains("reference_horizon") && !block["reference_horizon"].is_null()
                ? Json(block["reference_horizon"].get<double>())
                : Json();
        out["noise"] = noise;
        return out;
    }
    if (kind == "bump") {
        allow_keys(block,
                   {"kind", "beta", "lambda", "K", "T", "assignment", "assignment_mode", "seed", "width", "noise"},
                   "env(bump)");
        const auto mode = get_or<std::string>(block, "assignment_mode", "random");
        if (mode != "random" && mode != "round-robin")
            throw ConfigError("env(bump): assignment_mode must be random or round-robin");
        const auto width = get_or<std::string>(block, "width", "disjoint");
        if (width != "disjoint" && width != "overlapping") throw ConfigError("env(bump): width must be disjoint or overlapping");
        Json out{{"kind", kind},
                 {"beta", get_or(block, "beta", 1.0)},
                 {"lambda", get_or(block, "lambda", 1.0)},
                 {"K", get_or<std::size_t>(block, "K", 2)},
                 {"T", read_horizon(block, horizon, "env(bump)")},
                 {"assignment", block.contains("assignment") ? block["assignment"] : Json()},
                 {"assignment_mode", mode},
                 {"seed", get_or<std::uint64_t>(block, "seed", 0)},
                 {"width", width},
                 {"noise", noise}};
        return out;
    }
    if (kind == "piecewise") {
        allow_keys(block, {"kind", "segments", "baseline", "T", "noise"}, "env(piecewise)");
        if (!block.contains("segments") || !block["segments"].is_array())
            throw ConfigError("env(piecewise): 'segments' must be an array");
        Json segments = Json::array();
        Round total = 0;
        for (const auto& s : block["segments"]) {
            allow_keys(s, {"length", "gaps"}, "env(piecewise) segment");
            const auto length = s.at("length").get<Round>();
            total += length;
            segments.push_back(Json{{"length", length}, {"gaps", s.at("gaps").get<std::vector<double>>()}});
        }
        const Round declared = horizon ? *horizon : get_or<Round>(block, "T", total);
        if (declared != total)
            throw ConfigError("env(piecewise): segment lengths sum to " + std::to_string(total) + ", not T=" +
                              std::to_string(declared));
        return Json{{"kind", kind}, {"segments", segments}, {"baseline", get_or(block, "baseline", 1.0)},
                    {"T", total}, {"noise", noise}};
    }
    if (kind == "csv") {
        allow_keys(block, {"kind", "path", "T", "noise"}, "env(csv)");
        if (!block.contains("path")) throw ConfigError("env(csv): missing 'path'");
        Json out{{"kind", kind}, {"path", block["path"].get<std::string>()}};
        if (horizon || block.contains("T")) out["T"] = read_horizon(block, horizon, "env(csv)");
        out["noise"] = noise;
        return out;
    }
    throw ConfigError("env: unknown kind '" + kind + "' (trig, bump, piecewise, csv)");
}

}  // namespace

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

NoiseModel parse_noise(const Json& noise) {
    const Json spec = resolve_noise(noise);
    const auto kind = spec["kind"].get<std::string>();
    if (kind == "gaussian") return NoiseModel::gaussian(spec["variance"].get<double>(), spec["clip"].get<bool>());
    if (kind == "bernoulli") return NoiseModel::bernoulli();
    return NoiseModel::deterministic();
}

Json resolve_environment(const Json& block, std::optional<Round> horizon) {
    try {
        return resolve_unchecked(block, horizon);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("env: ") + e.what());
    }
}

EnvironmentModel build_environment(const Json& env) {
    const auto kind = env.at("kind").get<std::string>();
    const NoiseModel noise = parse_noise(env.at("noise"));
    if (kind == "trig") {
        TrigParams p;
        p.amplitude = env["A"].get<double>();
        p.frequency = env["nu"].get<double>();
        p.phase = env["phi"].get<double>();
        p.horizon = env["T"].get<Round>();
        if (!env["reference_horizon"].is_null()) p.reference_horizon = env["reference_horizon"].get<double>();
        return make_trig(p, noise);
    }
    if (kind == "bump") {
        BumpParams p;
        p.beta = env["beta"].get<double>();
        p.lambda = env["lambda"].get<double>();
        p.arms = env["K"].get<std::size_t>();
        p.horizon = env["T"].get<Round>();
        if (!env["assignment"].is_null()) {
            for (auto a : env["assignment"].get<std::vector<std::int64_t>>()) {
                if (a < 1) throw ConfigError("env(bump): assignment arms are 1-based");
                p.assignment.push_back(static_cast<Arm>(a - 1));
            }
        }
        p.assignment_mode = env["assignment_mode"] == "round-robin" ? AssignmentMode::RoundRobin : AssignmentMode::Random;
        p.seed = env["seed"].get<std::uint64_t>();
        p.width = env["width"] == "overlapping" ? BumpWidth::Overlapping : BumpWidth::Disjoint;
        return make_bump_instance(p, noise).env;
    }
    if (kind == "piecewise") {
        PiecewiseSpec spec;
        spec.baseline = env["baseline"].get<double>();
        for (const auto& s : env["segments"])
            spec.segments.push_back({s["length"].get<Round>(), s["gaps"].get<std::vector<double>>()});
        return make_piecewise(spec, noise);
    }
    if (kind == "csv") {
        auto model = load_csv(env["path"].get<std::string>(), noise);
        if (env.contains("T") && env["T"].get<Round>() != model.horizon())
            throw ConfigError("env(csv): file has " + std::to_string(model.horizon()) + " rounds, config says T=" +
                              std::to_string(env["T"].get<Round>()));
        return model;
    }
    throw ConfigError("env: unknown kind '" + kind + "'");
}

Json resolve_environment_document(const Json& doc) {
    if (doc.is_object() && doc.contains("env")) {
        std::optional<Round> horizon;
        if (doc.contains("T")) horizon = doc["T"].get<Round>();
        return resolve_environment(doc["env"], horizon);
    }
    return resolve_environment(doc);
}

ExperimentConfig parse_experiment(const Json& doc) {
    try {
        allow_keys(doc, {"env", "policy", "T", "R", "masterSeed", "checkpoints", "events"}, "config");
        if (!doc.contains("env")) throw ConfigError("config: missing 'env'");
        ExperimentConfig cfg;
        std::optional<Round> horizon;
        if (doc.contains("T")) horizon = doc["T"].get<Round>();
        cfg.env = resolve_environment(doc["env"], horizon);
        // The built horizon can be shorter than the requested one (bump instances round T
        // down to a multiple of M), and checkpoints must end at the rounds actually played.
        cfg.horizon = build_environment(cfg.env).horizon();
        if (!cfg.env.contains("T")) cfg.env["T"] = cfg.horizon;

        const Json policy = doc.contains("policy") ? doc["policy"] : Json{{"name", "meta"}};
        allow_keys(policy, {"name", "C2", "C5", "dyadic", "shift_mode"}, "policy");
        auto& spec = cfg.settings.policy;
        spec.name = get_or<std::string>(policy, "name", "meta");
        if (std::find(policy_names().begin(), policy_names().end(), spec.name) == policy_names().end())
            throw ConfigError("policy: unknown name '" + spec.name + "' (meta, se, rand, oracle-restart)");
        spec.c2 = get_or(policy, "C2", 1.0);
        spec.c5 = get_or(policy, "C5", 2.0);
        spec.dyadic_eviction = get_or(policy, "dyadic", true);
        const auto shift_mode = get_or<std::string>(policy, "shift_mode", "dyadic");
        if (shift_mode != "dyadic" && shift_mode != "exact")
            throw ConfigError("policy: shift_mode must be exact or dyadic");
        spec.shift_mode = shift_mode == "exact" ? ScanMode::Exact : ScanMode::Dyadic;
        if (!(spec.c2 > 0.0) || !(spec.c5 > 0.0)) throw ConfigError("policy: C2 and C5 must be > 0");

        const auto R = get_or<std::int64_t>(doc, "R", 1);
        if (R < 1) throw ConfigError("config: R must be >= 1");
        cfg.settings.replications = static_cast<std::size_t>(R);
        cfg.settings.master_seed = get_or<std::uint64_t>(doc, "masterSeed", 0);
        cfg.settings.checkpoints = doc.contains("checkpoints") ? doc["checkpoints"].get<std::vector<Round>>()
                                                               : default_checkpoints(cfg.horizon);
        validate_checkpoints(cfg.settings.checkpoints, cfg.horizon);
        cfg.settings.keep_events = get_or(doc, "events", false);
        return cfg;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

Json to_json(const ExperimentConfig& cfg) {
    const auto& p = cfg.settings.policy;
    Json policy{{"name", p.name}, {"C2", p.c2}, {"C5", p.c5}, {"dyadic", p.dyadic_eviction},
                {"shift_mode", p.shift_mode == ScanMode::Exact ? "exact" : "dyadic"}};
    return Json{{"env", cfg.env},
                {"policy", policy},
                {"T", cfg.env["T"]},  // requested; cfg.horizon may be shorter
                {"R", cfg.settings.replications},
                {"masterSeed", cfg.settings.master_seed},
                {"checkpoints", cfg.settings.checkpoints},
                {"events", cfg.settings.keep_events}};
}

}  // namespace sigshift
