#pragma once

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "armsim/types.hpp"

namespace armsim {

/// Sectioned key-value text: `[section]` headers, `key = value` lines,
/// `#` comments. Used for both arm configs and scenario files.
class Config {
public:
    static Config parse(const std::string& text) {
        Config cfg;
        std::istringstream in(text);
        std::string line;
        std::string section;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            if (s.front() == '[') {
                if (s.back() != ']' || s.size() < 3)
                    throw ConfigError("line " + std::to_string(lineno) +
                                      ": malformed section header '" + s + "'");
                section = strip(s.substr(1, s.size() - 2));
                cfg.touch(section);
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + s + "'");
            const std::string key = strip(s.substr(0, eq));
            const std::string val = strip(s.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            cfg.set(section, key, val);
        }
        return cfg;
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        auto& sec = touch(section);
        auto it = sec.find(key);
        if (it == sec.end()) {
            sec.emplace(key, value);
            order_[section].push_back(key);
        } else {
            it->second = value;
        }
    }

    /// Applies a `section.key=value` override string (CLI --set).
    void set_dotted(const std::string& assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
        const std::string path = strip(assignment.substr(0, eq));
        const auto dot = path.find('.');
        if (dot == std::string::npos)
            throw ConfigError("override key '" + path + "' lacks a section prefix");
        set(path.substr(0, dot), path.substr(dot + 1), strip(assignment.substr(eq + 1)));
    }

    bool has_section(const std::string& section) const {
        return sections_.count(section) != 0;
    }

    bool has(const std::string& section, const std::string& key) const {
        auto it = sections_.find(section);
        return it != sections_.end() && it->second.count(key) != 0;
    }

    std::string get_string(const std::string& section, const std::string& key) const {
        auto it = sections_.find(section);
        if (it == sections_.end())
            throw ConfigError("missing section [" + section + "]");
        auto kt = it->second.find(key);
        if (kt == it->second.end())
            throw ConfigError("missing key '" + key + "' in section [" + section + "]");
        return kt->second;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        return has(section, key) ? get_string(section, key) : fallback;
    }

    double get_double(const std::string& section, const std::string& key) const {
        return to_double(get_string(section, key), section, key);
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        return has(section, key) ? get_double(section, key) : fallback;
    }

    long long get_int(const std::string& section, const std::string& key) const {
        const std::string v = get_string(section, key);
        std::size_t pos = 0;
        long long out = 0;
        try {
            out = std::stoll(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size())
            throw ConfigError("[" + section + "] " + key + ": '" + v + "' is not an integer");
        return out;
    }

    long long get_int(const std::string& section, const std::string& key, long long fallback) const {
        return has(section, key) ? get_int(section, key) : fallback;
    }

    /// Comma-separated list of doubles.
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const {
        const std::string v = get_string(section, key);
        std::vector<double> out;
        std::size_t start = 0;
        while (start <= v.size()) {
            auto comma = v.find(',', start);
            if (comma == std::string::npos) comma = v.size();
            out.push_back(to_double(strip(v.substr(start, comma - start)), section, key));
            start = comma + 1;
        }
        return out;
    }

    std::vector<std::string> section_keys(const std::string& section) const {
        auto it = order_.find(section);
        if (it == order_.end()) return {};
        return it->second;
    }

    std::vector<std::string> section_names() const {
        return section_order_;
    }

private:
    static std::string strip(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static double to_double(const std::string& v, const std::string& section,
                            const std::string& key) {
        std::size_t pos = 0;
        double out = 0;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size() || v.empty())
            throw ConfigError("[" + section + "] " + key + ": '" + v + "' is not a number");
        return out;
    }

    std::map<std::string, std::string>& touch(const std::string& section) {
        auto it = sections_.find(section);
        if (it == sections_.end()) {
            section_order_.push_back(section);
            it = sections_.emplace(section, std::map<std::string, std::string>{}).first;
        }
        return it->second;
    }

    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::map<std::string, std::vector<std::string>> order_;
    std::vector<std::string> section_order_;
};

} // namespace armsim
