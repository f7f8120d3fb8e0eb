#pragma once

// Scenario files: `key = value` lines, `#` comments, optional [section]
// headers grouping keys (array, channel, filter, run). Lists are
// comma-separated. Unspecified keys take the table defaults of the file's
// `mode` (dl or ul).

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lensbeam/scenario.hpp"

namespace lensbeam::cli {

struct Override {
  std::string key;
  std::string value;
};

/// Parses "key=value". Throws ConfigError on malformed input.
Override parse_override(std::string_view text);

sim::ScenarioConfig parse_config_text(std::string_view text,
                                      std::span<const Override> overrides = {},
                                      std::string_view origin = "<config>");

/// Throws IoError if the file cannot be read, ConfigError on bad content.
sim::ScenarioConfig parse_config(const std::filesystem::path& path,
                                 std::span<const Override> overrides = {});

/// Every accepted key, in canonical order.
std::vector<std::string> known_keys();

}  // namespace lensbeam::cli
