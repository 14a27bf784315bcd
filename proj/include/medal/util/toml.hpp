#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace medal::toml {

using Value = std::variant<std::string, std::int64_t, double, bool,
                           std::vector<std::string>, std::vector<std::int64_t>,
                           std::vector<double>>;

/// Flat view of a TOML document: dotted paths ("backends.api.endpoint") map
/// to scalar or array values. Covers the subset this project's config files
/// use: [table] headers, bare/quoted keys, strings, ints, floats, booleans,
/// homogeneous scalar arrays, and # comments. No inline tables, no dates,
/// no multi-line strings.
class Table {
public:
    static Table parse_file(const std::filesystem::path& path);
    static Table parse(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& path) const { return values_.count(path) > 0; }

    std::optional<std::string> get_string(const std::string& path) const;
    std::optional<std::int64_t> get_int(const std::string& path) const;
    std::optional<double> get_double(const std::string& path) const;
    std::optional<bool> get_bool(const std::string& path) const;
    std::optional<std::vector<std::string>> get_string_array(const std::string& path) const;

    std::string require_string(const std::string& path) const;
    std::int64_t require_int(const std::string& path) const;
    std::vector<std::string> require_string_array(const std::string& path) const;

    /// Immediate child table names under `prefix` (e.g. "backends" ->
    /// {"api", "scripted"}).
    std::vector<std::string> subtables(const std::string& prefix) const;

    /// Keys with scalar values directly under `prefix`.
    std::vector<std::string> keys_under(const std::string& prefix) const;

    const std::map<std::string, Value>& raw() const { return values_; }

private:
    std::map<std::string, Value> values_;
};

}  // namespace medal::toml
