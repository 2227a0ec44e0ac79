#include "cfseq/config_file.hpp"

#include <fstream>
#include <sstream>

#include "cfseq/errors.hpp"

namespace cfseq {

namespace {
std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}
} // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

ConfigFile ConfigFile::parse_string(std::string_view text) {
    ConfigFile cfg;
    std::string current;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string line = trim(text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            cfg.sections_[current]; // section may stay empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.sections_[current][key] = value;
    }
    return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stod(get(section, key, ""));
    } catch (const std::exception&) {
        throw ConfigError("config value [" + section + "] " + key + " is not a number");
    }
}

long ConfigFile::get_long(const std::string& section, const std::string& key,
                          long fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stol(get(section, key, ""));
    } catch (const std::exception&) {
        throw ConfigError("config value [" + section + "] " + key + " is not an integer");
    }
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stoull(get(section, key, ""));
    } catch (const std::exception&) {
        throw ConfigError("config value [" + section + "] " + key + " is not an integer");
    }
}

void ConfigFile::set_dotted(const std::string& dotted, const std::string& value) {
    const auto dot = dotted.rfind('.');
    if (dot == std::string::npos)
        set("", dotted, value);
    else
        set(dotted.substr(0, dot), dotted.substr(dot + 1), value);
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
    if (key.empty()) throw ConfigError("config override with empty key");
    sections_[section][key] = value;
}

std::map<std::string, std::string> ConfigFile::section(const std::string& name) const {
    const auto s = sections_.find(name);
    return s == sections_.end() ? std::map<std::string, std::string>{} : s->second;
}

} // namespace cfseq
