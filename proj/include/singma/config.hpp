#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace singma {

/// Invalid configuration entry; what() reads "<field> <reason>".
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& reason)
        : std::runtime_error(field + " " + reason), field_(field), reason_(reason) {}
    const std::string& field() const { return field_; }
    const std::string& reason() const { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

/// Flat key=value configuration. Sections are key prefixes ("solver.h").
/// Lines starting with '#' and blank lines are ignored.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& entries() const { return values_; }

    std::string text(const std::string& key, const std::string& fallback) const;
    double real(const std::string& key, double fallback) const;
    long integer(const std::string& key, long fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::string choice(const std::string& key, const std::string& fallback,
                       const std::vector<std::string>& allowed) const;
    /// Comma-separated list of integers.
    std::vector<long> integers(const std::string& key, const std::vector<long>& fallback) const;

    /// Throws ConfigError for the first key not in `known`.
    void check_known(const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::string> values_;
};

/// Range checks producing "<key> <value> out of range (lo,hi)" style messages.
/// Brackets follow interval notation: '(' open, '[' closed.
double require_range(const std::string& key, double v, double lo, double hi, bool lo_closed = false,
                     bool hi_closed = false);
double require_above(const std::string& key, double v, double lo, bool closed = false);

}  // namespace singma
