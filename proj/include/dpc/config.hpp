#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dpc {

// Flat key = value file: one pair per line, '#' starts a comment, blank lines
// ignored. Duplicate keys are rejected. Typed getters record every key they
// are asked for; finish() then rejects keys the caller never recognized, so
// misspelled options fail loudly instead of silently using a default.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback);
    std::string require_string(const std::string& key);
    double get_double(const std::string& key, double fallback);
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
    int get_int(const std::string& key, int fallback);
    // Comma-separated doubles, e.g. "0.0, 0.1, 0.2".
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback);

    // Throws if the file contained keys never requested through a getter.
    void finish() const;

  private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> seen_;

    const std::string* lookup(const std::string& key);
};

}  // namespace dpc
