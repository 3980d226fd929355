#pragma once

#include <map>
#include <string>
#include <vector>

namespace resop {

/// Flat `key = value` file: one pair per line, `#` comments, values either
/// bare or double-quoted, lists comma-separated. Used for reservoir specs
/// and run configs.
class KeyValueFile {
public:
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string require_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double require_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated list; empty if the key is absent.
    std::vector<std::string> get_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    void set(const std::string& key, std::string value);
    const std::map<std::string, std::string>& entries() const { return values_; }
    const std::string& source() const { return source_; }

    friend KeyValueFile read_key_value_file(const std::string& path);
    friend KeyValueFile parse_key_value_text(const std::string& text, const std::string& source);

private:
    std::map<std::string, std::string> values_;
    std::string source_ = "<empty>";
};

KeyValueFile read_key_value_file(const std::string& path);
KeyValueFile parse_key_value_text(const std::string& text, const std::string& source = "<text>");

}  // namespace resop
