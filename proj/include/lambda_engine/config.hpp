#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lambda_engine {

// Line-oriented "key = value" document with [section] headers, comments
// starting with '#', and 1-based source locations kept for error reporting.
struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
    int col = 0;
};

struct ConfigSection {
    std::string name;
    int line = 0;
    std::vector<ConfigEntry> entries;

    const ConfigEntry* find(const std::string& key) const;
};

struct ConfigDoc {
    std::vector<ConfigSection> sections;

    const ConfigSection* find(const std::string& name) const;
};

// Throws ConfigError (with line/col) on malformed lines, bad section
// headers, or duplicate keys within a section.
ConfigDoc parse_config_text(const std::string& text);

// Typed readers; errors carry the entry's location.
double entry_as_double(const ConfigEntry& e);
int entry_as_int(const ConfigEntry& e);
std::vector<double> entry_as_double_list(const ConfigEntry& e);

}  // namespace lambda_engine
