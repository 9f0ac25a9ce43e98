#pragma once

#include <map>
#include <string>
#include <vector>

namespace bpsgcn {

/// Flat `key = value` document. Lines starting with '#' are comments. A key
/// may repeat (split manifests list several files per split); getters for
/// single values take the last occurrence.
class KvConfig {
public:
    static KvConfig parse_file(const std::string& path);
    static KvConfig parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    const std::vector<std::string>& get_all(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

    /// Deterministic serialization: keys sorted, repeated keys in insertion order.
    std::string dump() const;

private:
    std::map<std::string, std::vector<std::string>> values_;
    static const std::vector<std::string> kEmpty;
};

} // namespace bpsgcn
