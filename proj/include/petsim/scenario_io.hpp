#pragma once

// Scenario files: nested key-value YAML. Parsing goes through yaml-cpp;
// writing uses a fixed key order and fixed number formatting so that
// dump -> load -> dump is byte-stable.

#include "petsim/engine.hpp"

#include <filesystem>
#include <string>

namespace petsim {

struct WorkloadSource {
    std::string preset;            ///< embedded preset name, or empty
    std::string trace;             ///< CSV path as written in the file, or empty
};

struct ScenarioDocument {
    ScenarioConfig config;
    WorkloadSource source;
};

/// Relative trace paths resolve against base_dir. Throws ConfigError.
ScenarioDocument parse_scenario(const std::string& text, const std::filesystem::path& base_dir);
ScenarioDocument load_scenario(const std::filesystem::path& path);
std::string dump_scenario(const ScenarioDocument& doc);

/// Default scenario running an embedded preset under one governor.
ScenarioDocument preset_scenario(const std::string& preset, const GovernorSpec& governor);

/// OPT1 (1 ms, 5 ms), OPT2 (1 ms, 10 ms), OPT3 (0.5 ms, 5 ms): control and
/// R-recalibration periods.
void apply_variant(ScenarioConfig& config, const std::string& variant);

}  // namespace petsim
