#include "medal/core/types.hpp"

#include <algorithm>

#include "medal/util/errors.hpp"
#include "medal/util/rng.hpp"

namespace medal::core {

bool is_known_language(std::string_view code) {
    return std::find(kKnownLanguages.begin(), kKnownLanguages.end(), code) !=
           kKnownLanguages.end();
}

std::string language_name(const LanguageTag& tag) {
    if (tag.code == "ZH") return "Chinese";
    if (tag.code == "EN") return "English";
    if (tag.code == "FR") return "French";
    if (tag.code == "DE") return "German";
    if (tag.code == "PT") return "Portuguese";
    if (tag.code == "ES") return "Spanish";
    return tag.code;
}

const std::array<std::string, kIssueCount>& issue_names() {
    static const std::array<std::string, kIssueCount> names = {
        "uninterpretable", "unsafe",     "lacks_empathy", "lacks_commonsense",
        "repetitive",      "incoherent", "irrelevant",    "nonfactual"};
    return names;
}

std::string_view issue_name(IssueLabel label) { return issue_names()[static_cast<int>(label)]; }

std::optional<IssueLabel> issue_from_name(std::string_view name) {
    const auto& names = issue_names();
    for (int i = 0; i < kIssueCount; ++i)
        if (names[i] == name) return static_cast<IssueLabel>(i);
    return std::nullopt;
}

std::string_view gender_hint_name(GenderHint g) {
    switch (g) {
        case GenderHint::male: return "male";
        case GenderHint::female: return "female";
        case GenderHint::none: return "none";
    }
    return "none";
}

std::optional<GenderHint> gender_hint_from_name(std::string_view name) {
    if (name == "male") return GenderHint::male;
    if (name == "female") return GenderHint::female;
    if (name == "none") return GenderHint::none;
    return std::nullopt;
}

std::string_view termination_name(Termination t) {
    switch (t) {
        case Termination::turn_cap: return "turn_cap";
        case Termination::end_flag: return "end_flag";
        case Termination::regeneration_exhausted: return "regeneration_exhausted";
    }
    return "turn_cap";
}

std::optional<Termination> termination_from_name(std::string_view name) {
    if (name == "turn_cap") return Termination::turn_cap;
    if (name == "end_flag") return Termination::end_flag;
    if (name == "regeneration_exhausted") return Termination::regeneration_exhausted;
    return std::nullopt;
}

int Dialogue::user_turn_count() const {
    int n = 0;
    for (const auto& t : turns)
        if (t.role == Role::user) ++n;
    return n;
}

bool DialogueAssessment::has_any_issue() const {
    return std::any_of(labels.begin(), labels.end(),
                       [](const LabelVerdict& v) { return v.flag == 1; });
}

void validate(const SeedContext& seed) {
    if (seed.scene_id.empty()) throw SchemaError("scene_id", "scene_id must be non-empty");
    if (seed.persona_id.empty()) throw SchemaError("persona_id", "persona_id must be non-empty");
    if (seed.language.code.empty()) throw SchemaError("language", "language must be non-empty");
    if (seed.affective_state.label.empty())
        throw SchemaError("affective_state", "affective_state must be non-empty");
    if (seed.affective_state.quadrant < 1 || seed.affective_state.quadrant > 4)
        throw SchemaError("affective_state.quadrant", "quadrant out of range [1,4]");
}

void validate(const Dialogue& dialogue, int max_user_turns) {
    if (dialogue.dialogue_id.empty())
        throw SchemaError("dialogue_id", "dialogue_id must be non-empty");
    validate(dialogue.seed);
    if (dialogue.turns.empty()) throw SchemaError("turns", "dialogue has no turns");
    if (dialogue.turns.front().role != Role::user)
        throw SchemaError("turns", "first turn role must be user");
    Role expected = Role::user;
    for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
        const Turn& t = dialogue.turns[i];
        if (t.role != expected) throw SchemaError("turns", "non-alternating roles");
        if (t.role == Role::user && t.attempt_count < 1)
            throw SchemaError("turns.attempt_count", "attempt_count must be >= 1");
        expected = expected == Role::user ? Role::chatbot : Role::user;
    }
    int users = dialogue.user_turn_count();
    if (users < 1) throw SchemaError("turns", "dialogue must contain at least one user turn");
    if (users > max_user_turns)
        throw SchemaError("turns", "user turn count " + std::to_string(users) +
                                       " exceeds cap " + std::to_string(max_user_turns));
}

namespace {
void validate_label_verdict(const LabelVerdict& v, std::string_view name) {
    if (v.flag != 0 && v.flag != 1)
        throw SchemaError(std::string(name), "flag must be 0 or 1");
    if (v.flag == 1 && (!v.comment || v.comment->empty()))
        throw SchemaError(std::string(name), "missing comment for " + std::string(name));
    if (v.flag == 0 && v.comment && !v.comment->empty())
        throw SchemaError(std::string(name), "comment present but flag is 0 for " + std::string(name));
}
}  // namespace

void validate(const DialogueAssessment& assessment) {
    if (assessment.dialogue_id.empty())
        throw SchemaError("dialogue_id", "dialogue_id must be non-empty");
    if (assessment.run_index < 0) throw SchemaError("run_index", "run_index must be >= 0");
    for (int i = 0; i < kIssueCount; ++i)
        validate_label_verdict(assessment.labels[i], issue_names()[i]);
    validate_label_verdict(assessment.other, "other");
    if (assessment.overall < 1 || assessment.overall > 5)
        throw SchemaError("overall", "overall out of range");
    if (assessment.overall_comment.empty())
        throw SchemaError("overall_comment", "overall_comment must be present");
}

void validate(const AnnotationRecord& record) {
    if (record.dialogue_id.empty())
        throw SchemaError("dialogue_id", "dialogue_id must be non-empty");
    if (record.annotator_id.empty())
        throw SchemaError("annotator_id", "annotator_id must be non-empty");
    for (int i = 0; i < kIssueCount; ++i)
        if (record.labels[i] != 0 && record.labels[i] != 1)
            throw SchemaError(issue_names()[i], "flag must be 0 or 1");
    if (record.overall < 1 || record.overall > 5)
        throw SchemaError("overall", "overall out of range");
    if (record.user_humanlikeness && (*record.user_humanlikeness < 1 || *record.user_humanlikeness > 5))
        throw SchemaError("user_humanlikeness", "user_humanlikeness out of range");
}

void validate(const BenchmarkEntry& entry) {
    if (entry.dialogue_id.empty())
        throw SchemaError("dialogue_id", "dialogue_id must be non-empty");
    if (entry.language.code.empty()) throw SchemaError("language", "language must be non-empty");
    validate(entry.source_assessment);
    if (entry.source_assessment.dialogue_id != entry.dialogue_id)
        throw SchemaError("source_assessment", "assessment belongs to a different dialogue");
}

std::string make_dialogue_id(const std::string& scene_id, const std::string& persona_id,
                             const LanguageTag& language, const std::string& user_model,
                             const std::string& chatbot_model, std::uint64_t rng_seed) {
    std::string material;
    material.reserve(scene_id.size() + persona_id.size() + language.code.size() +
                     user_model.size() + chatbot_model.size() + 24);
    auto push = [&material](std::string_view part) {
        material.append(part);
        material.push_back('\x1f');
    };
    push(scene_id);
    push(persona_id);
    push(language.code);
    push(user_model);
    push(chatbot_model);
    push(std::to_string(rng_seed));
    std::uint64_t h = fnv1a64(material);
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string("d") + buf;
}

}  // namespace medal::core
