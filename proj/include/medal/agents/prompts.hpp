#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medal/agents/chat.hpp"
#include "medal/core/types.hpp"

namespace medal::agents {

inline constexpr std::string_view kEndOfDialogueToken = "END_OF_DIALOGUE";

/// True when `text` signals the end of the dialogue: exact token match after
/// trimming by default, substring containment when `substring_match` is set.
bool is_end_of_dialogue(std::string_view text, bool substring_match = false);

struct PromptPair {
    std::string system;
    std::string user;
};

/// Few-shot examples spliced into the first-turn prompt, per language.
/// Two neutral defaults ship per supported language; a directory of
/// <LANG>.txt files (one example per line) replaces them.
class FewShotExamples {
public:
    static FewShotExamples defaults();
    static FewShotExamples load_directory(const std::filesystem::path& dir);

    std::string block_for(const core::LanguageTag& language) const;

private:
    std::map<std::string, std::vector<std::string>> examples_;
};

/// A user-agent attempt the judge rejected, fed back to the next attempt.
struct RejectedAttempt {
    std::string text;
    std::string feedback;
};

// Prompt rendering is pure: identical inputs yield byte-identical prompts.
// The seed block stays in English while instructing native-language output.

PromptPair render_first_turn_prompt(const core::SeedContext& seed,
                                    const FewShotExamples& examples);

PromptPair render_user_turn_prompt(const core::SeedContext& seed,
                                   const std::vector<core::Turn>& history,
                                   const std::optional<RejectedAttempt>& rejected);

/// System prompt plus the history mapped onto alternating user/assistant
/// messages. The chatbot never sees the seed context.
std::vector<ChatMessage> render_chatbot_prompt(const std::vector<core::Turn>& history);

/// History must end with the candidate user utterance under evaluation.
PromptPair render_user_judge_prompt(const std::vector<core::Turn>& history);

struct JudgeVerdict {
    bool accept = false;
    std::optional<std::string> feedback;  // present iff !accept
};

/// Protocol: "Yes." (optional trailing whitespace) accepts; "No. <feedback>"
/// rejects. Anything else throws ProtocolError in strict mode; lenient mode
/// tolerates case and surrounding whitespace and treats unparseable replies
/// as rejections with generic feedback.
JudgeVerdict parse_verdict(const std::string& text, bool lenient = false);

/// "user: ..." / "chatbot: ..." lines, one per turn.
std::string render_dialogue_context(const std::vector<core::Turn>& history);

}  // namespace medal::agents
