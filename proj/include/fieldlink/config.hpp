#pragma once

#include <stdexcept>
#include <string>

#include "fieldlink/scenario.hpp"

namespace fieldlink {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_number(line) {}
    int line_number;
};

/// Flat key=value scenario file with [detector1]/[detector2]/[switching]/
/// [quadrature] sections; '#' comments; unknown keys rejected with line numbers.
ScenarioSpec parse_scenario_file(const std::string& path);
ScenarioSpec parse_scenario_text(const std::string& text);

} // namespace fieldlink
