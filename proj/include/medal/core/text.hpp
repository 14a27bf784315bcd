#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "medal/core/types.hpp"

namespace medal::core {

/// Unit used for utterance-length statistics. Chinese is measured in
/// characters (code points), every other language in whitespace-delimited
/// words; the unit travels with each statistic.
enum class LengthUnit { words, characters };

std::string_view length_unit_name(LengthUnit unit);

LengthUnit length_unit_for(const LanguageTag& language);

/// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

/// Whitespace-delimited word count.
std::size_t word_count(std::string_view text);

struct MeasuredLength {
    double value = 0.0;
    LengthUnit unit = LengthUnit::words;
};

MeasuredLength utterance_length(std::string_view text, const LanguageTag& language);

/// Language-aware tokenizer for lexical-diversity statistics: per-character
/// tokens for Chinese, lowercased whitespace tokens otherwise.
std::vector<std::string> tokenize(std::string_view text, const LanguageTag& language);

std::string to_lower_ascii(std::string_view text);

/// Whole-word occurrence test: `needle` (lowercase) occurs in `haystack`
/// case-insensitively with non-alphanumeric characters (or string edges)
/// on both sides.
bool contains_whole_word(std::string_view haystack, std::string_view needle);

}  // namespace medal::core
