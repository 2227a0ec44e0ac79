#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace cfseq {

/// Line-oriented key-value config: `[section]` headers, `key = value` pairs,
/// `#` comments, blank lines ignored. Keys before any header live in the ""
/// section.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(std::string_view text);

    bool has(const std::string& section, const std::string& key) const;

    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;

    /// Sets (or overrides) one value; `dotted` is "section.key" or bare "key".
    void set_dotted(const std::string& dotted, const std::string& value);
    void set(const std::string& section, const std::string& key, const std::string& value);

    /// All key-value pairs of one section; empty map when absent.
    std::map<std::string, std::string> section(const std::string& name) const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

} // namespace cfseq
