#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace medal::core {

// ---------------------------------------------------------------------------
// Languages
// ---------------------------------------------------------------------------

/// Language tag carried by every pipeline record. The six tags below are the
/// well-known set; other tags are accepted only when allow_extra_languages
/// is set at parse time.
struct LanguageTag {
    std::string code;  // "ZH", "EN", "FR", "DE", "PT", "ES", or an extension

    bool operator==(const LanguageTag&) const = default;
    auto operator<=>(const LanguageTag&) const = default;
};

inline constexpr std::array<std::string_view, 6> kKnownLanguages = {
    "ZH", "EN", "FR", "DE", "PT", "ES"};

bool is_known_language(std::string_view code);

/// Human-readable name for prompt rendering ("EN" -> "English"). Unknown
/// tags are returned unchanged.
std::string language_name(const LanguageTag& tag);

// ---------------------------------------------------------------------------
// Issue labels
// ---------------------------------------------------------------------------

/// The eight binary dialogue-quality issues. Enumerator order is the
/// canonical serialization order and must never change.
enum class IssueLabel : int {
    uninterpretable = 0,
    unsafe,
    lacks_empathy,
    lacks_commonsense,
    repetitive,
    incoherent,
    irrelevant,
    nonfactual,
};

inline constexpr int kIssueCount = 8;

const std::array<std::string, kIssueCount>& issue_names();
std::string_view issue_name(IssueLabel label);
std::optional<IssueLabel> issue_from_name(std::string_view name);

inline constexpr std::array<IssueLabel, kIssueCount> all_issues() {
    return {IssueLabel::uninterpretable, IssueLabel::unsafe,
            IssueLabel::lacks_empathy,   IssueLabel::lacks_commonsense,
            IssueLabel::repetitive,      IssueLabel::incoherent,
            IssueLabel::irrelevant,      IssueLabel::nonfactual};
}

// ---------------------------------------------------------------------------
// Seed context
// ---------------------------------------------------------------------------

enum class GenderHint { male, female, none };

std::string_view gender_hint_name(GenderHint g);
std::optional<GenderHint> gender_hint_from_name(std::string_view name);

struct AffectiveState {
    std::string label;
    int quadrant = 1;  // circumplex quadrant, 1..4

    bool operator==(const AffectiveState&) const = default;
};

/// The bundle that conditions one conversation starter.
struct SeedContext {
    std::string scene_id;
    std::string persona_id;
    LanguageTag language;
    std::string country;  // country framing used in the prompt, e.g. "Portugal"
    std::string scene_text;
    std::string persona_text;
    AffectiveState affective_state;
    GenderHint gender_hint = GenderHint::none;

    bool operator==(const SeedContext&) const = default;
};

// ---------------------------------------------------------------------------
// Dialogues
// ---------------------------------------------------------------------------

enum class Role { user, chatbot };

struct Turn {
    Role role = Role::user;
    std::string text;
    // user turns only:
    int attempt_count = 1;
    std::vector<std::string> judge_feedback_trail;

    bool operator==(const Turn&) const = default;
};

enum class Termination { turn_cap, end_flag, regeneration_exhausted };

std::string_view termination_name(Termination t);
std::optional<Termination> termination_from_name(std::string_view name);

struct Dialogue {
    std::string dialogue_id;
    SeedContext seed;
    std::string user_model;
    std::string chatbot_model;
    std::string judge_model;
    std::uint64_t rng_seed = 0;
    Termination termination = Termination::turn_cap;
    std::vector<Turn> turns;  // strictly alternating, first role = user

    int user_turn_count() const;
    bool operator==(const Dialogue&) const = default;
};

// ---------------------------------------------------------------------------
// Assessments and annotations
// ---------------------------------------------------------------------------

/// One binary flag plus the comment that must accompany a raised flag.
struct LabelVerdict {
    int flag = 0;                        // 0 or 1
    std::optional<std::string> comment;  // present iff flag == 1

    bool operator==(const LabelVerdict&) const = default;
};

/// One strong-judge verdict over a dialogue: eight issue flags, the free
/// "other" flag, and the 1-5 overall rating.
struct DialogueAssessment {
    std::string dialogue_id;
    std::string judge_model;
    int run_index = 0;
    std::array<LabelVerdict, kIssueCount> labels;  // Table order
    LabelVerdict other;
    int overall = 5;  // 1..5
    std::string overall_comment;

    const LabelVerdict& label(IssueLabel l) const { return labels[static_cast<int>(l)]; }
    LabelVerdict& label(IssueLabel l) { return labels[static_cast<int>(l)]; }
    bool has_any_issue() const;

    bool operator==(const DialogueAssessment&) const = default;
};

/// One human annotator's labels for one dialogue.
struct AnnotationRecord {
    std::string dialogue_id;
    std::string annotator_id;
    std::array<int, kIssueCount> labels{};  // 0/1, Table order
    int overall = 5;                        // 1..5
    std::optional<int> user_humanlikeness;  // 1..5

    bool operator==(const AnnotationRecord&) const = default;
};

/// Membership of one dialogue in a curated benchmark.
struct BenchmarkEntry {
    std::string dialogue_id;
    LanguageTag language;
    std::string chatbot_model;
    std::string user_model;
    bool seeded_no_issue = false;  // selected by the stage-1 no-issue seeding
    DialogueAssessment source_assessment;

    bool operator==(const BenchmarkEntry&) const = default;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Each throws SchemaError naming the offending field.
void validate(const SeedContext& seed);
void validate(const Dialogue& dialogue, int max_user_turns = 10);
void validate(const DialogueAssessment& assessment);
void validate(const AnnotationRecord& record);
void validate(const BenchmarkEntry& entry);

// ---------------------------------------------------------------------------
// Identifiers
// ---------------------------------------------------------------------------

/// Content-derived dialogue identifier: stable hash of
/// (scene_id, persona_id, language, user_model, chatbot_model, rng_seed),
/// so re-running an identical plan reproduces identical ids.
std::string make_dialogue_id(const std::string& scene_id, const std::string& persona_id,
                             const LanguageTag& language, const std::string& user_model,
                             const std::string& chatbot_model, std::uint64_t rng_seed);

}  // namespace medal::core
