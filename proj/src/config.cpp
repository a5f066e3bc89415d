#include "config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "hashing.hpp"

namespace fincorpus {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
        if (c == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

bool valid_key_part(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    return true;
}

Config::Value parse_value(std::string_view text, const std::string& where) {
    if (text.empty()) throw_config(where + ": missing value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') {
            throw_config(where + ": unterminated string");
        }
        std::string out;
        for (std::size_t i = 1; i + 1 < text.size(); ++i) {
            char c = text[i];
            if (c == '\\' && i + 2 < text.size()) {
                const char n = text[i + 1];
                if (n == '"' || n == '\\') {
                    out.push_back(n);
                    ++i;
                    continue;
                }
                if (n == 'n') {
                    out.push_back('\n');
                    ++i;
                    continue;
                }
                if (n == 't') {
                    out.push_back('\t');
                    ++i;
                    continue;
                }
            }
            out.push_back(c);
        }
        return out;
    }
    if (text == "true") return true;
    if (text == "false") return false;
    const bool looks_float = text.find_first_of(".eE") != std::string_view::npos &&
                             text.find_first_not_of("+-0123456789.eE") == std::string_view::npos;
    if (!looks_float) {
        std::int64_t iv{};
        const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), iv);
        if (ec == std::errc() && p == text.data() + text.size()) return iv;
    }
    {
        double dv{};
        const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), dv);
        if (ec == std::errc() && p == text.data() + text.size()) return dv;
    }
    throw_config(where + ": cannot parse value '" + std::string(text) + "'");
}

}  // namespace

Config Config::parse_string(std::string_view text, const std::string& origin) {
    Config cfg;
    cfg.raw_ = std::string(text);
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw_config(where + ": malformed section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw_config(where + ": empty section name");
            std::size_t start = 0;
            while (true) {
                const auto dot = name.find('.', start);
                const auto part = name.substr(start, dot == std::string_view::npos
                                                         ? name.size() - start
                                                         : dot - start);
                if (!valid_key_part(part)) {
                    throw_config(where + ": invalid section name '" + std::string(name) + "'");
                }
                if (dot == std::string_view::npos) break;
                start = dot + 1;
            }
            section = std::string(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw_config(where + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        if (!valid_key_part(key)) {
            throw_config(where + ": invalid key '" + std::string(key) + "'");
        }
        const auto value = trim(line.substr(eq + 1));
        const std::string full_key =
            section.empty() ? std::string(key) : section + "." + std::string(key);
        if (cfg.values_.count(full_key) != 0) {
            throw_config(where + ": duplicate key '" + full_key + "'");
        }
        cfg.values_.emplace(full_key, parse_value(value, where + " (" + full_key + ")"));
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::optional<std::int64_t> Config::get_int(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
    throw_config("config key '" + key + "' is not an integer");
}

std::optional<double> Config::get_double(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* v = std::get_if<double>(&it->second)) return *v;
    if (const auto* v = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*v);
    throw_config("config key '" + key + "' is not a number");
}

std::optional<bool> Config::get_bool(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* v = std::get_if<bool>(&it->second)) return *v;
    throw_config("config key '" + key + "' is not a boolean");
}

std::optional<std::string> Config::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
    throw_config("config key '" + key + "' is not a string");
}

std::int64_t Config::int_or(const std::string& key, std::int64_t def) const {
    return get_int(key).value_or(def);
}

double Config::double_or(const std::string& key, double def) const {
    return get_double(key).value_or(def);
}

bool Config::bool_or(const std::string& key, bool def) const {
    return get_bool(key).value_or(def);
}

std::string Config::string_or(const std::string& key, const std::string& def) const {
    return get_string(key).value_or(def);
}

std::vector<std::string> Config::subsections(const std::string& prefix) const {
    std::vector<std::string> out;
    const std::string p = prefix + ".";
    for (const auto& [key, _] : values_) {
        if (key.rfind(p, 0) != 0) continue;
        const auto rest = key.substr(p.size());
        const auto dot = rest.find('.');
        if (dot == std::string::npos) continue;
        const auto name = rest.substr(0, dot);
        if (out.empty() || out.back() != name) out.push_back(name);
    }
    return out;
}

std::vector<std::string> Config::keys_in(const std::string& section) const {
    std::vector<std::string> out;
    const std::string p = section + ".";
    for (const auto& [key, _] : values_) {
        if (key.rfind(p, 0) != 0) continue;
        const auto rest = key.substr(p.size());
        if (rest.find('.') == std::string::npos) out.push_back(rest);
    }
    return out;
}

std::string Config::digest_hex() const { return to_hex(hash_bytes(raw_, 0x636f6e666967ULL)); }

}  // namespace fincorpus
