#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "medal/agents/backend.hpp"
#include "medal/agents/prompts.hpp"
#include "medal/core/types.hpp"

namespace medal::autolabel {

/// System/user pair instructing the strong judge to assess one dialogue
/// across the eight issue dimensions plus "Other" and the overall rating,
/// answering with a strict JSON object. Rendering is pure.
agents::PromptPair render_label_prompt(const core::Dialogue& dialogue);

/// Extracts the outermost JSON object from judge output (tolerating code
/// fences and surrounding prose), validates flags, comment presence and the
/// overall range, and normalizes key aliases. Throws SchemaError or
/// ProtocolError on violations.
core::DialogueAssessment parse_assessment(const std::string& text);

/// Labels one dialogue, retrying schema violations with the same prompt up
/// to `schema_retries` extra attempts. Returns nullopt if all attempts fail
/// (the dialogue stays unlabelled for a later retry).
struct LabelerOptions {
    std::string judge_model;
    agents::DecodingProfile profile =
        agents::DecodingProfile::standard(agents::ProfileName::strong_judge);
    int schema_retries = 2;
};

std::optional<core::DialogueAssessment> label_dialogue(const core::Dialogue& dialogue,
                                                       agents::ChatBackend& backend,
                                                       const LabelerOptions& options,
                                                       int run_index = 0);

// ---------------------------------------------------------------------------
// Malformed-user screening
// ---------------------------------------------------------------------------

struct ScreenResult {
    bool role_confusion = false;
    bool user_language_mixing = false;
    bool chatbot_language_mixing = false;
    std::string evidence;  // non-empty whenever any flag is set

    /// User-side defects exclude the dialogue from the clean set; a chatbot
    /// that mixes languages is a chatbot deficiency and is kept.
    bool user_malformed() const { return role_confusion || user_language_mixing; }
};

struct ScreenRecord {
    std::string dialogue_id;
    bool screened = false;  // false = the judge reply was unusable
    ScreenResult result;
};

agents::PromptPair render_screen_prompt(const core::Dialogue& dialogue);

ScreenResult parse_screen_verdict(const std::string& text);

/// Asks the judge three explicit booleans about the dialogue (user role
/// reversal, user off-target language, chatbot language mixing). Protocol
/// errors yield an unscreened marker instead of failing the run.
ScreenRecord screen_user_malformed(const core::Dialogue& dialogue, agents::ChatBackend& backend,
                                   const LabelerOptions& options);

// ---------------------------------------------------------------------------
// Keyword filtering of judge comments
// ---------------------------------------------------------------------------

/// Lowercase keywords matched against uninterpretable-issue comments.
/// Defaults: the six language names plus generic mixing terms.
std::vector<std::string> default_filter_keywords();

/// A dialogue is excluded iff its uninterpretable flag is 1 and the
/// attached comment contains any keyword (case-insensitive). Adding
/// keywords can only grow the result.
std::set<std::string> comment_keyword_filter(const std::vector<core::DialogueAssessment>& assessments,
                                             const std::vector<std::string>& keywords);

// ---------------------------------------------------------------------------
// Judge self-consistency
// ---------------------------------------------------------------------------

struct ConsistencyReport {
    int runs = 0;
    std::size_t dialogues_measured = 0;
    std::size_t dialogues_skipped = 0;  // at least one unlabelled run
    // population std-dev per dimension, averaged over dialogues
    std::array<double, core::kIssueCount> issue_std{};
    double overall_std = 0.0;
};

/// Labels every dialogue k times (sequentially per dialogue, so run_index
/// stays meaningful) and reports the mean per-dimension population standard
/// deviation. k must be >= 2.
ConsistencyReport measure_consistency(const std::vector<core::Dialogue>& dialogues,
                                      agents::ChatBackend& backend, const LabelerOptions& options,
                                      int k);

/// Std-dev aggregation over pre-collected runs, exposed for tests.
ConsistencyReport consistency_from_runs(
    const std::vector<std::vector<core::DialogueAssessment>>& runs_per_dialogue, int k);

}  // namespace medal::autolabel
