#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hfstrat {

/// Raised for malformed or invalid configuration; the CLI maps it to the
/// validation exit code.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One INI-style section; keys keep file order so grid axes enumerate the
/// way they were declared.
struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const;
};

/// Flat key/value config with [section] headers, # or ; comments, and
/// comma-separated lists where the consumer expects them.
struct ConfigFile {
    std::vector<ConfigSection> sections;

    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::filesystem::path& path);

    const ConfigSection* find(const std::string& name) const;

    /// Value lookups; get() without a default throws ConfigError.
    std::string get(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    std::optional<std::string> maybe(const std::string& section, const std::string& key) const;
};

/// "a, b,c" -> {"a", "b", "c"}; empty items rejected.
std::vector<std::string> split_list(const std::string& value);

bool parse_bool(const std::string& value);

}  // namespace hfstrat
