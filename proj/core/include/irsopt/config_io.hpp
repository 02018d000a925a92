#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "irsopt/config.hpp"

namespace irsopt {

// Scenario files are JSON objects whose keys mirror ScenarioConfig. Every
// key is optional (missing keys keep default_scenario() values) and unknown
// keys are rejected. Powers are given in dBm (`*_dbm`) or watts (`*_w`),
// path loss references in dB, distances in meters, durations in seconds.
// Arrival bounds are integers in `arrival_unit` ("bytes" or "bits").
//
// Overrides are `dotted.key=value` strings applied to the canonical tree
// after the file is read; the key must already exist in that tree.

ScenarioConfig parse_config(std::string_view text, std::span<const std::string> overrides = {},
                            std::string_view source = "<memory>");

/// `path == "default"` selects the built-in scenario.
ScenarioConfig load_config(const std::filesystem::path& path,
                           std::span<const std::string> overrides = {});

ScenarioConfig apply_overrides(const ScenarioConfig& config, std::span<const std::string> overrides);

/// Canonical, fully populated JSON document (2-space indent).
std::string config_to_text(const ScenarioConfig& config);

}  // namespace irsopt
