#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "uavloc/sim.hpp"

namespace uavloc {

/// Parses a scenario JSON document. Throws std::invalid_argument with a
/// field-level message on schema or validation errors.
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json scenario_to_json(const Scenario& scn);

/// Loads a scenario file, applying `--override key=value` pairs first.
/// A bare key is shorthand for a known field (e.g. bandwidth_hz sets both
/// radio.bandwidth_hz and radio.effective_bandwidth_hz); dotted keys
/// address the JSON tree directly (radio.tx_power_dbm=27).
Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});

/// FNV-1a over the canonical JSON dump, as a 16-digit hex string.
std::string scenario_hash(const Scenario& scn);

}  // namespace uavloc
