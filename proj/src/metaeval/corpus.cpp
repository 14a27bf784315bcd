#include "medal/metaeval/corpus.hpp"

#include <set>

#include "medal/util/errors.hpp"

namespace medal::metaeval {

double mtld_factor_count(const std::vector<std::string>& tokens, double threshold) {
    double factors = 0.0;
    std::set<std::string> types;
    std::size_t segment_tokens = 0;
    double ttr = 1.0;
    for (const auto& token : tokens) {
        ++segment_tokens;
        types.insert(token);
        ttr = static_cast<double>(types.size()) / static_cast<double>(segment_tokens);
        if (ttr < threshold) {
            factors += 1.0;
            types.clear();
            segment_tokens = 0;
            ttr = 1.0;
        }
    }
    if (segment_tokens > 0) factors += (1.0 - ttr) / (1.0 - threshold);
    return factors;
}

std::optional<double> mtld(const std::vector<std::string>& tokens, double threshold) {
    if (tokens.size() < 2) return std::nullopt;
    if (threshold <= 0.0 || threshold >= 1.0) throw Error("mtld threshold must be in (0, 1)");
    double forward = mtld_factor_count(tokens, threshold);
    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    double backward = mtld_factor_count(reversed, threshold);
    const double n = static_cast<double>(tokens.size());
    if (forward == 0.0 && backward == 0.0) return std::nullopt;
    double fwd = forward == 0.0 ? 0.0 : n / forward;
    double bwd = backward == 0.0 ? 0.0 : n / backward;
    if (forward == 0.0) return bwd;
    if (backward == 0.0) return fwd;
    return (fwd + bwd) / 2.0;
}

CorpusStats corpus_stats(const std::vector<core::Dialogue>& dialogues) {
    CorpusStats stats;
    stats.dialogue_count = dialogues.size();

    struct Accumulator {
        std::size_t dialogues = 0;
        std::size_t user_turns = 0;
        double length_sum = 0.0;
        std::size_t utterances = 0;
        std::vector<std::string> tokens;
        core::LengthUnit unit = core::LengthUnit::words;
    };
    std::map<std::string, Accumulator> by_language;
    std::size_t total_user_turns = 0;

    for (const auto& d : dialogues) {
        Accumulator& acc = by_language[d.seed.language.code];
        acc.unit = core::length_unit_for(d.seed.language);
        ++acc.dialogues;
        int users = d.user_turn_count();
        acc.user_turns += static_cast<std::size_t>(users);
        total_user_turns += static_cast<std::size_t>(users);
        for (const auto& turn : d.turns) {
            acc.length_sum += core::utterance_length(turn.text, d.seed.language).value;
            ++acc.utterances;
            auto turn_tokens = core::tokenize(turn.text, d.seed.language);
            acc.tokens.insert(acc.tokens.end(), turn_tokens.begin(), turn_tokens.end());
        }
    }

    if (!dialogues.empty())
        stats.mean_user_turns =
            static_cast<double>(total_user_turns) / static_cast<double>(dialogues.size());

    for (auto& [language, acc] : by_language) {
        LanguageStats ls;
        ls.dialogue_count = acc.dialogues;
        ls.mean_user_turns =
            static_cast<double>(acc.user_turns) / static_cast<double>(acc.dialogues);
        ls.mean_utterance_length.unit = acc.unit;
        ls.mean_utterance_length.value =
            acc.utterances == 0 ? 0.0 : acc.length_sum / static_cast<double>(acc.utterances);
        ls.mtld = mtld(acc.tokens);
        stats.per_language[language] = std::move(ls);
    }
    return stats;
}

}  // namespace medal::metaeval
