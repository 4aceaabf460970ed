#pragma once

#include "legctl/simulation.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace legctl
{

/// Parse or validation failure, located by key and 1-based line (0 when the
/// problem is not tied to a line).
struct ConfigError : Error
{
  ConfigError(std::string key, int line, const std::string& message);

  std::string key;
  int line = 0;
};

/**
 * Experiment description in a small sectioned text format:
 *
 *   # comment
 *   [robot.nominal]          controller model
 *   com_upper = 0.2
 *   [robot.true]             plant; keys default to the nominal values
 *   com_upper = 0.24
 *   [gains]
 *   kp = 100                 scalar or [kp0, kp1, kp2, kp3]
 *   [trajectory]
 *   q_start = [0, 0.2, 0.1, 0.4]
 *   [rls]
 *   adaptation = true
 *   [sim]
 *   control_period = 0.01
 *
 * Every key is optional. Unknown sections or keys, duplicates and
 * out-of-range values are errors.
 */
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Text that parses back to the given config.
std::string format_config(const ExperimentConfig& config);

} // namespace legctl
