// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "doa/error.hpp"
#include "doa/montecarlo.hpp"

namespace doa {

// Scenario parse failure with the offending location when known.
class ScenarioParseError : public ConfigError {
public:
    ScenarioParseError(const std::string& message, int line, int column)
        : ConfigError(message), line_(line), column_(column) {}
    explicit ScenarioParseError(const std::string& message) : ConfigError(message) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_ = 0;
    int column_ = 0;
};

struct LoadedScenario {
    ScenarioConfig config;
    std::string normalized; // effective configuration with every default filled in
};

// Parses the JSON scenario text. Unknown keys are rejected; physical
// quantities carry their unit in the key name (carrier_freq_hz, doa_deg,
// ...). origin names the source in diagnostics.
LoadedScenario parse_scenario(const std::string& text, const std::string& origin);

LoadedScenario load_scenario_file(const std::string& path);

// Normalized-echo serialization shared by the loader and `validate`.
std::string normalized_scenario_json(const ScenarioConfig& config);

} // namespace doa
