#include "singma/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "singma/csv.hpp"

namespace singma {

namespace {
std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
    const char* s = v.c_str();
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(s, &end);
    if (v.empty() || end != s + v.size() || errno == ERANGE || !std::isfinite(x)) {
        throw ConfigError(key, "'" + v + "' is not a finite number");
    }
    return x;
}

long parse_integer(const std::string& key, const std::string& v) {
    const char* s = v.c_str();
    char* end = nullptr;
    errno = 0;
    const long x = std::strtol(s, &end, 10);
    if (v.empty() || end != s + v.size() || errno == ERANGE) throw ConfigError(key, "'" + v + "' is not an integer");
    return x;
}
}  // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "'" + t + "' is not of the form key=value");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "has an empty key");
        cfg.set(key, trim(t.substr(eq + 1)));
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config", "cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::real(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_real(key, it->second);
}

long Config::integer(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_integer(key, it->second);
}

bool Config::flag(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError(key, "'" + v + "' is not a boolean");
}

std::string Config::choice(const std::string& key, const std::string& fallback,
                           const std::vector<std::string>& allowed) const {
    const std::string v = text(key, fallback);
    if (std::find(allowed.begin(), allowed.end(), v) != allowed.end()) return v;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    throw ConfigError(key, "'" + v + "' is not one of " + list);
}

std::vector<long> Config::integers(const std::string& key, const std::vector<long>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<long> out;
    std::istringstream in(it->second);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_integer(key, trim(item)));
    if (out.empty()) throw ConfigError(key, "is an empty list");
    return out;
}

void Config::check_known(const std::vector<std::string>& known) const {
    for (const auto& [key, value] : values_) {
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "is not a recognised key");
    }
}

double require_range(const std::string& key, double v, double lo, double hi, bool lo_closed, bool hi_closed) {
    const bool ok = (lo_closed ? v >= lo : v > lo) && (hi_closed ? v <= hi : v < hi);
    if (!ok) {
        throw ConfigError(key, csv_number(v) + " out of range " + (lo_closed ? "[" : "(") + csv_number(lo) + "," +
                                   csv_number(hi) + (hi_closed ? "]" : ")"));
    }
    return v;
}

double require_above(const std::string& key, double v, double lo, bool closed) {
    if (!(closed ? v >= lo : v > lo)) throw ConfigError(key, csv_number(v) + " must be " + (closed ? ">= " : "> ") + csv_number(lo));
    return v;
}

}  // namespace singma
