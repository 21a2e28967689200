#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "xlradr/engine/scenario.h"

namespace xlradr {

// Config keys in canonical order.
const std::vector<std::string_view>& ConfigKeys();

// Sets one key from its text form. Throws ConfigInvalid on an unknown key or
// an unparsable value; range checks are left to Scenario::Validate.
void ApplyKey(Scenario& scenario, std::string_view key, std::string_view value);

// `key = value` lines, `#` starts a comment. Later lines override earlier ones.
Scenario ParseConfig(std::string_view text);
Scenario LoadConfig(const std::string& path);

// Every key in canonical order with shortest round-trip numbers.
std::string SerializeConfig(const Scenario& scenario);

// FNV-1a 64 over the canonical form without the seed, as 16 hex digits.
std::string ScenarioHash(const Scenario& scenario);

}  // namespace xlradr
