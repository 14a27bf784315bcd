#include "medal/metaeval/preference.hpp"

#include <cctype>

#include "medal/agents/prompts.hpp"
#include "medal/util/errors.hpp"

namespace medal::metaeval {
namespace {

std::string render_pair_prompt(const core::Dialogue& first, const core::Dialogue& second,
                               const std::string& criterion) {
    std::string user = "Criterion: " + criterion + "\n\n";
    user += "Dialogue A:\n\n" + agents::render_dialogue_context(first.turns);
    user += "\n\nDialogue B:\n\n" + agents::render_dialogue_context(second.turns);
    return user;
}

constexpr const char* kPreferenceSystem =
    R"(You are comparing two dialogues, labelled A and B, that start from the same situation. Choose the dialogue that better satisfies the stated criterion. Answer with the single letter A or B and nothing else.)";

// strict single-letter protocol; trailing punctuation tolerated
char parse_choice(const std::string& text) {
    std::string t = text;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && (std::isspace(static_cast<unsigned char>(t.back())) || t.back() == '.'))
        t.pop_back();
    if (t == "A" || t == "a") return 'A';
    if (t == "B" || t == "b") return 'B';
    throw ProtocolError("preference verdict outside protocol: '" + text + "'");
}

}  // namespace

std::string_view preference_outcome_name(PreferenceOutcome outcome) {
    switch (outcome) {
        case PreferenceOutcome::win_a: return "win_a";
        case PreferenceOutcome::win_b: return "win_b";
        case PreferenceOutcome::tie: return "tie";
    }
    return "tie";
}

std::string default_preference_criterion() {
    return "cultural appropriateness and naturalness of the conversation in its language";
}

PreferenceTrial pairwise_preference_trial(const core::Dialogue& dialogue_a,
                                          const core::Dialogue& dialogue_b,
                                          const std::string& criterion_prompt,
                                          agents::ChatBackend& backend,
                                          const std::string& judge_model) {
    auto profile = agents::DecodingProfile::standard(agents::ProfileName::meta_eval);
    auto run_trial = [&](const core::Dialogue& first, const core::Dialogue& second,
                         const std::string& session) {
        auto request = agents::ChatRequest::make(
            judge_model, profile,
            {{agents::MessageRole::system, kPreferenceSystem},
             {agents::MessageRole::user, render_pair_prompt(first, second, criterion_prompt)}},
            session);
        return parse_choice(backend.complete(request).text);
    };

    PreferenceTrial trial;
    const std::string pair_key = dialogue_a.dialogue_id + "|" + dialogue_b.dialogue_id;
    try {
        char first_pass = run_trial(dialogue_a, dialogue_b, pair_key + "#1");
        char second_pass = run_trial(dialogue_b, dialogue_a, pair_key + "#2");
        // order reversal: a win needs the same underlying dialogue both times
        bool a_in_first = first_pass == 'A';
        bool a_in_second = second_pass == 'B';
        if (a_in_first && a_in_second) trial.outcome = PreferenceOutcome::win_a;
        else if (!a_in_first && !a_in_second) trial.outcome = PreferenceOutcome::win_b;
        else trial.outcome = PreferenceOutcome::tie;
    } catch (const ProtocolError&) {
        trial.outcome = PreferenceOutcome::tie;
        trial.protocol_error = true;
    }
    return trial;
}

}  // namespace medal::metaeval
