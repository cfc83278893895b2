#pragma once

#include <string>
#include <string_view>

#include "tpts/simulator.hpp"

namespace tpts {

// Parses a key = value document (one pair per line, '#' comments). Unspecified
// keys keep their defaults. Unknown keys, non-numeric values, and out-of-range
// values raise a config error naming the key and line.
SimConfig parse_config(std::string_view text);

// Applies a single "key=value" override to an existing config.
void apply_override(SimConfig& cfg, const std::string& assignment);

// Serializes a config in the schema parse_config accepts (round-trips exactly).
std::string config_text(const SimConfig& cfg);

// The schema with the default values filled in.
std::string default_config_text();

}  // namespace tpts
