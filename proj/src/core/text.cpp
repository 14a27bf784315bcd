#include "medal/core/text.hpp"

#include <cctype>

namespace medal::core {

std::string_view length_unit_name(LengthUnit unit) {
    return unit == LengthUnit::words ? "words" : "characters";
}

LengthUnit length_unit_for(const LanguageTag& language) {
    return language.code == "ZH" ? LengthUnit::characters : LengthUnit::words;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t count = 0;
    for (unsigned char c : text)
        if ((c & 0xC0) != 0x80) ++count;  // skip continuation bytes
    return count;
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool space = std::isspace(c) != 0;
        if (!space && !in_word) ++count;
        in_word = !space;
    }
    return count;
}

MeasuredLength utterance_length(std::string_view text, const LanguageTag& language) {
    LengthUnit unit = length_unit_for(language);
    double value = unit == LengthUnit::characters
                       ? static_cast<double>(utf8_length(text))
                       : static_cast<double>(word_count(text));
    return {value, unit};
}

std::vector<std::string> tokenize(std::string_view text, const LanguageTag& language) {
    std::vector<std::string> tokens;
    if (length_unit_for(language) == LengthUnit::characters) {
        std::size_t i = 0;
        while (i < text.size()) {
            std::size_t len = 1;
            unsigned char c = static_cast<unsigned char>(text[i]);
            if ((c & 0xF8) == 0xF0) len = 4;
            else if ((c & 0xF0) == 0xE0) len = 3;
            else if ((c & 0xE0) == 0xC0) len = 2;
            if (i + len > text.size()) len = 1;
            if (!(len == 1 && std::isspace(c)))
                tokens.emplace_back(text.substr(i, len));
            i += len;
        }
        return tokens;
    }
    std::string current;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current += static_cast<char>(std::tolower(c));
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string to_lower_ascii(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) out += static_cast<char>(std::tolower(c));
    return out;
}

namespace {
bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }
}  // namespace

bool contains_whole_word(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return false;
    std::string lower = to_lower_ascii(haystack);
    std::size_t pos = 0;
    while ((pos = lower.find(needle, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(lower[pos - 1]));
        std::size_t end = pos + needle.size();
        bool right_ok = end >= lower.size() || !is_word_char(static_cast<unsigned char>(lower[end]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

}  // namespace medal::core
