#pragma once

// Reader for the TOML subset used by run configs: comments, [tables],
// [[arrays of tables]], bare or quoted keys, basic and literal strings,
// integers, floats, booleans, arrays and inline tables. Dates, multi-line
// strings and dotted keys are rejected with a ConfigError.

#include <string>
#include <string_view>

#include "json.hpp"

namespace bss {

/// Parses `text` into a JSON object. `origin` names the source in errors.
nlohmann::json parse_toml(std::string_view text, const std::string& origin = "<config>");

nlohmann::json parse_toml_file(const std::string& path);

}  // namespace bss
