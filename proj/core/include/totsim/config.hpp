#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "totsim/exper.hpp"

namespace totsim {

/// Parses a scenario from JSON. Unknown fields, wrong types and out-of-range
/// values throw ConfigError naming the field path. When `defaults_applied`
/// is given, the path of every absent field that took its default is
/// appended to it.
ScenarioConfig parse_config(const nlohmann::json& j,
                            std::vector<std::string>* defaults_applied = nullptr);

/// Reads and parses a config file. I/O and JSON syntax errors become
/// ConfigError with an empty path.
ScenarioConfig load_config(const std::filesystem::path& path,
                           std::vector<std::string>* defaults_applied = nullptr);

/// Normalized form with every default written out. parse_config of the
/// result yields an equal config.
nlohmann::json to_json(const ScenarioConfig& cfg);

}  // namespace totsim
