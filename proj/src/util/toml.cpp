#include "medal/util/toml.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "medal/util/errors.hpp"
#include "medal/util/io.hpp"

namespace medal::toml {
namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

// Parses a quoted or bare key starting at pos; advances pos past it.
std::string parse_key(std::string_view s, std::size_t& pos, const std::string& origin,
                      std::size_t line) {
    if (pos < s.size() && s[pos] == '"') {
        std::string key;
        ++pos;
        while (pos < s.size() && s[pos] != '"') {
            if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
            key += s[pos++];
        }
        if (pos >= s.size()) fail(origin, line, "unterminated quoted key");
        ++pos;
        return key;
    }
    std::size_t start = pos;
    while (pos < s.size() && is_bare_key_char(s[pos])) ++pos;
    if (pos == start) fail(origin, line, "expected key");
    return std::string(s.substr(start, pos - start));
}

std::string parse_basic_string(std::string_view s, std::size_t& pos, const std::string& origin,
                               std::size_t line) {
    std::string out;
    ++pos;  // opening quote
    while (pos < s.size() && s[pos] != '"') {
        char c = s[pos];
        if (c == '\\') {
            ++pos;
            if (pos >= s.size()) fail(origin, line, "dangling escape");
            switch (s[pos]) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: fail(origin, line, "unsupported escape in string");
            }
            ++pos;
        } else {
            out += c;
            ++pos;
        }
    }
    if (pos >= s.size()) fail(origin, line, "unterminated string");
    ++pos;  // closing quote
    return out;
}

// Scalar token: string, bool, int, or float.
Value parse_scalar(std::string_view token, const std::string& origin, std::size_t line) {
    token = trim(token);
    if (token.empty()) fail(origin, line, "empty value");
    if (token == "true") return true;
    if (token == "false") return false;

    std::string cleaned;
    cleaned.reserve(token.size());
    for (char c : token)
        if (c != '_') cleaned += c;

    bool looks_float = cleaned.find_first_of(".eE") != std::string::npos &&
                       cleaned.find_first_not_of("+-0123456789.eE") == std::string::npos;
    if (!looks_float) {
        std::int64_t iv = 0;
        auto [p, ec] = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), iv);
        if (ec == std::errc() && p == cleaned.data() + cleaned.size()) return iv;
    }
    double dv = 0;
    auto [p, ec] = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), dv);
    if (ec == std::errc() && p == cleaned.data() + cleaned.size()) return dv;
    fail(origin, line, "cannot parse value: " + std::string(token));
}

// Splits an array body "a, b, c" respecting quoted strings.
Value parse_array(std::string_view body, const std::string& origin, std::size_t line) {
    std::vector<std::string> strings;
    std::vector<std::int64_t> ints;
    std::vector<double> doubles;
    int kind = -1;  // 0 string, 1 int, 2 double

    std::size_t pos = 0;
    while (true) {
        while (pos < body.size() && (std::isspace(static_cast<unsigned char>(body[pos])) || body[pos] == ',')) ++pos;
        if (pos >= body.size()) break;
        if (body[pos] == '"') {
            std::string s = parse_basic_string(body, pos, origin, line);
            if (kind == -1) kind = 0;
            if (kind != 0) fail(origin, line, "mixed array types");
            strings.push_back(std::move(s));
        } else {
            std::size_t start = pos;
            while (pos < body.size() && body[pos] != ',') ++pos;
            Value v = parse_scalar(body.substr(start, pos - start), origin, line);
            if (std::holds_alternative<std::int64_t>(v)) {
                if (kind == -1) kind = 1;
                if (kind == 2) { doubles.push_back(static_cast<double>(std::get<std::int64_t>(v))); continue; }
                if (kind != 1) fail(origin, line, "mixed array types");
                ints.push_back(std::get<std::int64_t>(v));
            } else if (std::holds_alternative<double>(v)) {
                if (kind == 1) {  // promote
                    for (auto i : ints) doubles.push_back(static_cast<double>(i));
                    ints.clear();
                }
                if (kind == 0) fail(origin, line, "mixed array types");
                kind = 2;
                doubles.push_back(std::get<double>(v));
            } else {
                fail(origin, line, "unsupported array element");
            }
        }
    }
    if (kind == 0) return strings;
    if (kind == 2) return doubles;
    return ints;  // empty arrays come out as empty int arrays
}

}  // namespace

Table Table::parse_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw ConfigError("config file not found: " + path.string());
    return parse(read_file(path), path.string());
}

Table Table::parse(const std::string& text, const std::string& origin) {
    Table table;
    std::string prefix;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated table header");
            std::string_view inner = trim(line.substr(1, line.size() - 2));
            std::size_t pos = 0;
            std::string header;
            while (true) {
                std::string part = parse_key(inner, pos, origin, lineno);
                header += header.empty() ? part : "." + part;
                while (pos < inner.size() && std::isspace(static_cast<unsigned char>(inner[pos]))) ++pos;
                if (pos >= inner.size()) break;
                if (inner[pos] != '.') fail(origin, lineno, "bad table header");
                ++pos;
                while (pos < inner.size() && std::isspace(static_cast<unsigned char>(inner[pos]))) ++pos;
            }
            prefix = header;
            continue;
        }

        std::string_view sv = line;
        std::size_t pos = 0;
        std::string key = parse_key(sv, pos, origin, lineno);
        while (pos < sv.size() && std::isspace(static_cast<unsigned char>(sv[pos]))) ++pos;
        if (pos >= sv.size() || sv[pos] != '=') fail(origin, lineno, "expected '=' after key");
        ++pos;
        while (pos < sv.size() && std::isspace(static_cast<unsigned char>(sv[pos]))) ++pos;
        if (pos >= sv.size()) fail(origin, lineno, "missing value");

        std::string full = prefix.empty() ? key : prefix + "." + key;
        Value value;
        if (sv[pos] == '"') {
            value = parse_basic_string(sv, pos, origin, lineno);
            std::string_view rest = trim(sv.substr(pos));
            if (!rest.empty() && rest.front() != '#') fail(origin, lineno, "trailing content after string");
        } else if (sv[pos] == '[') {
            std::size_t close = sv.rfind(']');
            if (close == std::string_view::npos || close < pos)
                fail(origin, lineno, "unterminated array (arrays must be single-line)");
            value = parse_array(sv.substr(pos + 1, close - pos - 1), origin, lineno);
        } else {
            std::string_view rest = sv.substr(pos);
            std::size_t hash = rest.find('#');
            if (hash != std::string_view::npos) rest = rest.substr(0, hash);
            value = parse_scalar(rest, origin, lineno);
        }
        if (table.values_.count(full)) fail(origin, lineno, "duplicate key: " + full);
        table.values_[full] = std::move(value);
    }
    return table;
}

std::optional<std::string> Table::get_string(const std::string& path) const {
    auto it = values_.find(path);
    if (it == values_.end()) return std::nullopt;
    if (auto* s = std::get_if<std::string>(&it->second)) return *s;
    throw ConfigError("config key '" + path + "' is not a string");
}

std::optional<std::int64_t> Table::get_int(const std::string& path) const {
    auto it = values_.find(path);
    if (it == values_.end()) return std::nullopt;
    if (auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
    throw ConfigError("config key '" + path + "' is not an integer");
}

std::optional<double> Table::get_double(const std::string& path) const {
    auto it = values_.find(path);
    if (it == values_.end()) return std::nullopt;
    if (auto* v = std::get_if<double>(&it->second)) return *v;
    if (auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
    throw ConfigError("config key '" + path + "' is not a number");
}

std::optional<bool> Table::get_bool(const std::string& path) const {
    auto it = values_.find(path);
    if (it == values_.end()) return std::nullopt;
    if (auto* v = std::get_if<bool>(&it->second)) return *v;
    throw ConfigError("config key '" + path + "' is not a boolean");
}

std::optional<std::vector<std::string>> Table::get_string_array(const std::string& path) const {
    auto it = values_.find(path);
    if (it == values_.end()) return std::nullopt;
    if (auto* v = std::get_if<std::vector<std::string>>(&it->second)) return *v;
    if (auto* e = std::get_if<std::vector<std::int64_t>>(&it->second); e && e->empty())
        return std::vector<std::string>{};
    throw ConfigError("config key '" + path + "' is not a string array");
}

std::string Table::require_string(const std::string& path) const {
    auto v = get_string(path);
    if (!v) throw ConfigError("missing config key: " + path);
    return *v;
}

std::int64_t Table::require_int(const std::string& path) const {
    auto v = get_int(path);
    if (!v) throw ConfigError("missing config key: " + path);
    return *v;
}

std::vector<std::string> Table::require_string_array(const std::string& path) const {
    auto v = get_string_array(path);
    if (!v) throw ConfigError("missing config key: " + path);
    return *v;
}

std::vector<std::string> Table::subtables(const std::string& prefix) const {
    std::set<std::string> names;
    std::string p = prefix + ".";
    for (const auto& [key, _] : values_) {
        if (key.rfind(p, 0) != 0) continue;
        std::string rest = key.substr(p.size());
        std::size_t dot = rest.find('.');
        if (dot != std::string::npos) names.insert(rest.substr(0, dot));
    }
    return {names.begin(), names.end()};
}

std::vector<std::string> Table::keys_under(const std::string& prefix) const {
    std::vector<std::string> keys;
    std::string p = prefix + ".";
    for (const auto& [key, _] : values_) {
        if (key.rfind(p, 0) != 0) continue;
        std::string rest = key.substr(p.size());
        if (rest.find('.') == std::string::npos) keys.push_back(rest);
    }
    return keys;
}

}  // namespace medal::toml
