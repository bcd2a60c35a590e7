#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include <json.hpp>

#include "sigshift/environment.hpp"
#include "sigshift/harness.hpp"
#include "sigshift/registry.hpp"

namespace sigshift {

using Json = nlohmann::ordered_json;

// Parses a JSON file; syntax errors become ConfigError.
Json load_json_file(const std::filesystem::path& path);

// Fills every default of an environment block
//   {"kind": "trig" | "bump" | "piecewise" | "csv", params..., "noise": {...}}
// and checks key names and types. `horizon` (a top-level T) overrides the block's own T.
Json resolve_environment(const Json& block, std::optional<Round> horizon = std::nullopt);
EnvironmentModel build_environment(const Json& resolved);
NoiseModel parse_noise(const Json& noise);

struct ExperimentConfig {
    Json env;  // resolved block
    Round horizon = 1;
    RunSettings settings;
};

// {env, policy:{name,...}, T, R, masterSeed, checkpoints?, events?}
ExperimentConfig parse_experiment(const Json& doc);
Json to_json(const ExperimentConfig& config);

// Accepts either a bare environment block or a document with an "env" member (and an
// optional top-level T), as used by the analysis commands.
Json resolve_environment_document(const Json& doc);

}  // namespace sigshift
