#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medal/core/text.hpp"
#include "medal/core/types.hpp"

namespace medal::metaeval {

/// Bidirectional MTLD at the given type-token-ratio threshold: a factor
/// completes whenever the running TTR drops below the threshold; the
/// remainder contributes the partial factor (1 - TTR) / (1 - threshold).
/// The value is tokens/factors averaged over the forward and backward
/// passes. Undefined (nullopt) for fewer than two tokens or when both
/// passes accumulate zero factors.
std::optional<double> mtld(const std::vector<std::string>& tokens, double threshold = 0.72);

/// Single-direction factor count, exposed for hand-trace tests.
double mtld_factor_count(const std::vector<std::string>& tokens, double threshold = 0.72);

struct LanguageStats {
    std::size_t dialogue_count = 0;
    double mean_user_turns = 0.0;
    core::MeasuredLength mean_utterance_length;  // unit-tagged
    std::optional<double> mtld;
};

struct CorpusStats {
    std::size_t dialogue_count = 0;
    double mean_user_turns = 0.0;
    std::map<std::string, LanguageStats> per_language;
};

/// Corpus statistics over a dialogue set: counts, user turns per dialogue,
/// utterance length in the language's unit, and lexical diversity over the
/// concatenated per-language text.
CorpusStats corpus_stats(const std::vector<core::Dialogue>& dialogues);

}  // namespace medal::metaeval
