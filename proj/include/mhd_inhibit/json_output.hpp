#pragma once

#include <json.hpp>

#include <string>

namespace mhdi {

using Json = nlohmann::ordered_json;

/// Pretty-printed JSON with every floating-point value written as %.17g
/// (non-finite values become null). Output ends with a newline.
std::string to_json_text(const Json& j);
/// Same number formatting on a single line, no trailing newline.
std::string to_json_line(const Json& j);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace mhdi
