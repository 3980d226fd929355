#include "resop/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace resop {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

std::string KeyValueFile::require_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw std::invalid_argument(source_ + ": missing required key '" + key + "'");
    return it->second;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueFile::require_double(const std::string& key) const {
    const std::string text = require_string(key);
    char* endp = nullptr;
    const double v = std::strtod(text.c_str(), &endp);
    if (endp == text.c_str() || *endp != '\0' || !std::isfinite(v))
        throw std::invalid_argument(source_ + ": key '" + key + "': '" + text + "' is not a number");
    return v;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    return has(key) ? require_double(key) : fallback;
}

long KeyValueFile::get_long(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const std::string text = require_string(key);
    char* endp = nullptr;
    const long v = std::strtol(text.c_str(), &endp, 10);
    if (endp == text.c_str() || *endp != '\0')
        throw std::invalid_argument(source_ + ": key '" + key + "': '" + text + "' is not an integer");
    return v;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string text = require_string(key);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw std::invalid_argument(source_ + ": key '" + key + "': '" + text + "' is not a boolean");
}

std::vector<std::string> KeyValueFile::get_list(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const std::string text = require_string(key);
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            const std::string item = trim(text.substr(start, i - start));
            if (!item.empty()) out.push_back(item);
            start = i + 1;
        }
    }
    return out;
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : get_list(key)) {
        char* endp = nullptr;
        const double v = std::strtod(item.c_str(), &endp);
        if (endp == item.c_str() || *endp != '\0' || !std::isfinite(v))
            throw std::invalid_argument(source_ + ": key '" + key + "': '" + item + "' is not a number");
        out.push_back(v);
    }
    return out;
}

void KeyValueFile::set(const std::string& key, std::string value) {
    values_[key] = std::move(value);
}

KeyValueFile parse_key_value_text(const std::string& text, const std::string& source) {
    KeyValueFile kv;
    kv.source_ = source;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(source + ":" + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty())
            throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": empty key");
        kv.values_[key] = value;
    }
    return kv;
}

KeyValueFile read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_key_value_text(buffer.str(), path);
}

}  // namespace resop
