#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace mibbo {

// Plain-text experiment configuration: one `key = value` pair per line,
// `#` starts a comment, blank lines are ignored. Keys must be unique;
// duplicates are rejected so typos cannot silently shadow a setting.
std::map<std::string, std::string> parse_config_text(const std::string& text);

std::map<std::string, std::string> load_config_file(
    const std::filesystem::path& path);

}  // namespace mibbo
