#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fincorpus {

// Key/value configuration tree parsed from a TOML-style file:
// `[section.subsection]` headers, `key = value` entries, `#` comments.
// Values are integers, floats, booleans, or double-quoted strings.
// Keys are addressed with dotted paths ("policies.SM.min_chars").
class Config {
public:
    using Value = std::variant<std::int64_t, double, bool, std::string>;

    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(std::string_view text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    std::optional<std::int64_t> get_int(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::string> get_string(const std::string& key) const;

    std::int64_t int_or(const std::string& key, std::int64_t def) const;
    double double_or(const std::string& key, double def) const;
    bool bool_or(const std::string& key, bool def) const;
    std::string string_or(const std::string& key, const std::string& def) const;

    // Immediate child section names under `prefix` ("policies" -> {"SM", ...}).
    std::vector<std::string> subsections(const std::string& prefix) const;

    // Leaf key names directly inside `section`.
    std::vector<std::string> keys_in(const std::string& section) const;

    // Digest of the raw configuration text (empty config digests to a fixed value).
    std::string digest_hex() const;

    bool empty() const { return values_.empty(); }

private:
    std::map<std::string, Value> values_;
    std::string raw_;
};

}  // namespace fincorpus
