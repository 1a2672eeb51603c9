// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tgs/world.hpp"

namespace tgs {

/// Parses and validates a scenario document. Throws ParseError on malformed
/// input and ValidationError naming the failing field.
ScenarioSpec load_scenario(const std::filesystem::path& path);
ScenarioSpec scenario_from_json(const nlohmann::json& doc);

nlohmann::json scenario_to_json(const ScenarioSpec& spec);
void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path);

/// Directory holding the four bundled scenarios.
std::filesystem::path bundled_scenario_dir();
std::vector<std::string> bundled_scenario_names();

/// Accepts either a path to a scenario file or a bundled scenario name.
std::filesystem::path resolve_scenario(const std::string& name_or_path);

}  // namespace tgs
