#include "core/config.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>
#include <filesystem>

namespace linproc {

namespace {

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    if (csv::trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(csv::trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
    fail(ErrorCode::parse, "config key '" + key + "': '" + value + "' is not " + what);
}

} // namespace

const std::vector<std::string>& Config::schema() {
    static const std::vector<std::string> keys = {
        "process",     "K",           "V",          "N",        "kappa",       "scheduled",  "renormalize",
        "coefficients", "coefficients_file", "tail_l2", "innovation", "seed",  "n",          "replicates",
        "omegas",      "tower",       "threshold",  "n_max",    "past_window", "orbit_length", "orbits",
        "grid",        "ks_max",      "band_min",   "spread_max", "svg",
    };
    return keys;
}

bool Config::known_key(const std::string& key) {
    const auto& s = schema();
    return std::find(s.begin(), s.end(), key) != s.end();
}

Config Config::parse(std::string_view text, const std::string& origin) {
    Config cfg;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = csv::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos) fail(ErrorCode::parse, where + ": expected key=value");
        const std::string key(csv::trim(line.substr(0, eq)));
        const std::string value(csv::trim(line.substr(eq + 1)));
        if (key.empty()) fail(ErrorCode::parse, where + ": empty key");
        if (!known_key(key)) fail(ErrorCode::parse, where + ": unknown key '" + key + "'");
        if (cfg.has(key)) fail(ErrorCode::parse, where + ": duplicate key '" + key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    auto cfg = parse(csv::read_file(path), path);
    cfg.base_dir_ = std::filesystem::path(path).parent_path().string();
    return cfg;
}

void Config::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        fail(ErrorCode::parse, "override '" + std::string(assignment) + "' is not key=value");
    set(std::string(csv::trim(assignment.substr(0, eq))), std::string(csv::trim(assignment.substr(eq + 1))));
}

void Config::set(const std::string& key, const std::string& value) {
    if (!known_key(key)) fail(ErrorCode::parse, "unknown key '" + key + "'");
    values_[key] = value;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return csv::parse_uint(it->second);
    } catch (const Error&) {
        bad_value(key, it->second, "a nonnegative integer");
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return get_optional_double(key).value_or(fallback);
}

std::optional<double> Config::get_optional_double(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    try {
        return csv::parse_double(it->second);
    } catch (const Error&) {
        bad_value(key, it->second, "a number");
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const auto& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v, "a boolean");
}

std::vector<std::uint64_t> Config::get_uint_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    for (auto item : split_list(it->second)) {
        try {
            out.push_back(csv::parse_uint(item));
        } catch (const Error&) {
            bad_value(key, it->second, "a list of nonnegative integers");
        }
    }
    return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    std::vector<double> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    for (auto item : split_list(it->second)) {
        try {
            out.push_back(csv::parse_double(item));
        } catch (const Error&) {
            bad_value(key, it->second, "a list of numbers");
        }
    }
    return out;
}

std::string Config::echo() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
}

} // namespace linproc
