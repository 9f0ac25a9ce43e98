#include "bpsgcn/kvconfig.hpp"

#include "bpsgcn/errors.hpp"

#include <fstream>
#include <sstream>

namespace bpsgcn {

const std::vector<std::string> KvConfig::kEmpty;

namespace {
std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
} // namespace

KvConfig KvConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StateError("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

KvConfig KvConfig::parse_string(const std::string& text) {
    KvConfig cfg;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected `key = value`", lineno);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", lineno);
        cfg.values_[key].push_back(value);
    }
    return cfg;
}

bool KvConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string KvConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end() || it->second.empty())
        throw ArgumentError("missing config key: " + key);
    return it->second.back();
}

std::string KvConfig::get_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    try {
        return std::stod(get(key));
    } catch (const std::exception&) {
        throw ArgumentError("config key " + key + " is not a number: " + get(key));
    }
}

long KvConfig::get_long(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    try {
        return std::stol(get(key));
    } catch (const std::exception&) {
        throw ArgumentError("config key " + key + " is not an integer: " + get(key));
    }
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ArgumentError("config key " + key + " is not a boolean: " + v);
}

const std::vector<std::string>& KvConfig::get_all(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? kEmpty : it->second;
}

void KvConfig::set(const std::string& key, const std::string& value) {
    values_[key] = {value};
}

std::string KvConfig::dump() const {
    std::ostringstream out;
    for (const auto& [key, vals] : values_)
        for (const auto& v : vals) out << key << " = " << v << "\n";
    return out.str();
}

} // namespace bpsgcn
