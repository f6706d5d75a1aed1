#include "hfstrat/config.hpp"

#include <fstream>
#include <sstream>

namespace hfstrat {
namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

const std::string* ConfigSection::find(const std::string& key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return &v;
    }
    return nullptr;
}

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cfg;
    ConfigSection* current = nullptr;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            }
            cfg.sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
            current = &cfg.sections.back();
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        if (current == nullptr) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any [section]");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (current->find(key) != nullptr) {
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                              key + "' in [" + current->name + "]");
        }
        current->entries.emplace_back(std::move(key), std::move(value));
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
    for (const auto& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
    auto value = maybe(section, key);
    if (!value) {
        throw ConfigError("config: missing key '" + key + "' in section [" + section + "]");
    }
    return *value;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    return maybe(section, key).value_or(fallback);
}

std::optional<std::string> ConfigFile::maybe(const std::string& section,
                                             const std::string& key) const {
    const ConfigSection* s = find(section);
    if (s == nullptr) return std::nullopt;
    const std::string* v = s->find(key);
    if (v == nullptr) return std::nullopt;
    return *v;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        std::string item = trim(comma == std::string::npos ? value.substr(start)
                                                           : value.substr(start, comma - start));
        if (item.empty()) throw ConfigError("config: empty item in list '" + value + "'");
        items.push_back(std::move(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

bool parse_bool(const std::string& value) {
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    throw ConfigError("config: expected a boolean, found '" + value + "'");
}

}  // namespace hfstrat
