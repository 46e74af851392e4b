#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace linproc {

// key=value configuration. One entry per line, `#` starts a comment, list
// values are comma separated. Keys outside the schema and repeated keys are
// rejected with Error(parse).
class Config {
public:
    static Config parse(std::string_view text, const std::string& origin = "<config>");
    static Config load(const std::string& path);

    static const std::vector<std::string>& schema();
    static bool known_key(const std::string& key);

    /// `key=value` from the command line; replaces any file value.
    void apply_override(std::string_view assignment);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::optional<double> get_optional_double(const std::string& key) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::uint64_t> get_uint_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    /// Directory of the file the config came from, for relative paths.
    const std::string& base_dir() const noexcept { return base_dir_; }

    /// Resolved entries in key order.
    const std::map<std::string, std::string>& entries() const noexcept { return values_; }
    std::string echo() const;

private:
    std::map<std::string, std::string> values_;
    std::string base_dir_;
};

} // namespace linproc
