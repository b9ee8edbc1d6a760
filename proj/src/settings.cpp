#include "dtn/settings.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dtn/error.hpp"

namespace dtn {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    std::string_view rest = std::string_view(t).substr(end - t.c_str());
    if (rest == "k" || rest == "K")
        v *= 1e3;
    else if (rest == "M")
        v *= 1e6;
    else if (rest == "G")
        v *= 1e9;
    else if (!rest.empty() || end == t.c_str())
        throw ConfigError("setting '" + key + "' has a malformed numeric value '" + t + "'");
    return v;
}

std::pair<std::string, std::string> split_pair(const std::string& value, const std::string& key) {
    const size_t comma = value.find(',');
    if (comma == std::string::npos)
        throw ConfigError("setting '" + key + "' must be a comma-separated pair");
    return {trim(value.substr(0, comma)), trim(value.substr(comma + 1))};
}

} // namespace

int64_t parse_size_value(std::string_view text) {
    return static_cast<int64_t>(std::llround(parse_number(std::string(text), "<value>")));
}

Settings Settings::parse(std::string_view text) {
    Settings s;
    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++lineno;
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", lineno);
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", lineno);
        s.kv_[key] = trim(line.substr(eq + 1));
        if (pos > text.size()) break;
    }
    return s;
}

Settings Settings::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open settings file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string Settings::serialize() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

const std::string& Settings::fetch(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing required setting '" + key + "'");
    read_.insert(key);
    return it->second;
}

std::string Settings::get_string(const std::string& key) const { return fetch(key); }

std::string Settings::get_string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    return fetch(key);
}

double Settings::get_double(const std::string& key) const { return parse_number(fetch(key), key); }

double Settings::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return get_double(key);
}

int64_t Settings::get_i64(const std::string& key) const {
    return static_cast<int64_t>(std::llround(parse_number(fetch(key), key)));
}

int64_t Settings::get_i64(const std::string& key, int64_t fallback) const {
    if (!has(key)) return fallback;
    return get_i64(key);
}

bool Settings::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = fetch(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("setting '" + key + "' must be true or false");
}

std::pair<double, double> Settings::get_pair(const std::string& key) const {
    auto [a, b] = split_pair(fetch(key), key);
    return {parse_number(a, key), parse_number(b, key)};
}

std::pair<int64_t, int64_t> Settings::get_pair_i64(const std::string& key) const {
    auto [a, b] = get_pair(key);
    return {static_cast<int64_t>(std::llround(a)), static_cast<int64_t>(std::llround(b))};
}

std::string Settings::group_key(int group, const std::string& field) const {
    const std::string specific = "Group" + std::to_string(group) + "." + field;
    if (has(specific)) return specific;
    return "Group." + field;
}

std::vector<std::string> Settings::unread_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
        if (!read_.contains(k)) out.push_back(k);
    return out;
}

} // namespace dtn
