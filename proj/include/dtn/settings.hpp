#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dtn {

// Flat "key = value" configuration in The ONE's settings dialect: one pair per
// line, '#' comments, later duplicates override earlier ones, numeric values
// may carry k/M suffixes (1e3/1e6) and pairs are comma-separated. Group-
// specific keys (GroupN.x) fall back to the Group.x default.
class Settings {
public:
    static Settings parse(std::string_view text);
    static Settings parse_file(const std::string& path);

    // canonical "key = value" lines, sorted by key; re-parses to an equal map
    std::string serialize() const;

    bool has(const std::string& key) const { return kv_.contains(key); }
    bool operator==(const Settings& o) const { return kv_ == o.kv_; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int64_t get_i64(const std::string& key) const;  // k/M suffixes expanded
    int64_t get_i64(const std::string& key, int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::pair<double, double> get_pair(const std::string& key) const;
    std::pair<int64_t, int64_t> get_pair_i64(const std::string& key) const;

    // "Group4.bufferSize" falling back to "Group.bufferSize"
    std::string group_key(int group, const std::string& field) const;

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    // keys never read through an accessor; used for unknown-key warnings
    std::vector<std::string> unread_keys() const;

    const std::map<std::string, std::string>& raw() const { return kv_; }

private:
    const std::string& fetch(const std::string& key) const;
    std::map<std::string, std::string> kv_;
    mutable std::set<std::string> read_;
};

// Expands a numeric literal with an optional k/M suffix.
int64_t parse_size_value(std::string_view text);

} // namespace dtn
