#include "dpc/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dpc {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': not a number: '" + text + "'");
    }
    if (pos != text.size()) {
        throw std::invalid_argument("config key '" + key + "': trailing junk in '" + text + "'");
    }
    return v;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        }
        if (!cfg.values_.emplace(key, value).second) {
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        }
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string* Config::lookup(const std::string& key) {
    seen_[key] = true;
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
    const std::string* v = lookup(key);
    return v ? *v : fallback;
}

std::string Config::require_string(const std::string& key) {
    const std::string* v = lookup(key);
    if (!v) throw std::invalid_argument("config: missing required key '" + key + "'");
    return *v;
}

double Config::get_double(const std::string& key, double fallback) {
    const std::string* v = lookup(key);
    return v ? parse_double(key, *v) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) {
    const std::string* v = lookup(key);
    if (!v) return fallback;
    try {
        return std::stoull(*v);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': not an unsigned integer: '" + *v +
                                    "'");
    }
}

int Config::get_int(const std::string& key, int fallback) {
    const std::string* v = lookup(key);
    if (!v) return fallback;
    try {
        return std::stoi(*v);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': not an integer: '" + *v + "'");
    }
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) {
    const std::string* v = lookup(key);
    if (!v) return fallback;
    std::vector<double> out;
    std::string item;
    std::istringstream in(*v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw std::invalid_argument("config key '" + key + "': empty list element");
        }
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) {
        throw std::invalid_argument("config key '" + key + "': empty list");
    }
    return out;
}

void Config::finish() const {
    for (const auto& [key, value] : values_) {
        (void)value;
        if (!seen_.count(key)) {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
}

}  // namespace dpc
