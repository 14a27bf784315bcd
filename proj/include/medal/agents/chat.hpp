#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace medal::agents {

enum class MessageRole { system, user, assistant };

std::string_view message_role_name(MessageRole role);

struct ChatMessage {
    MessageRole role = MessageRole::user;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

/// Named decoding parameter bundles. The constants are fixed by the
/// generation and meta-evaluation settings and are asserted by unit tests;
/// deviating runs must mark the override explicitly in configuration.
enum class ProfileName {
    user_first,
    user_next,
    user_judge,
    chatbot,
    strong_judge,
    meta_eval,
    meta_eval_reasoning,
};

std::string_view profile_name(ProfileName name);
std::optional<ProfileName> profile_from_name(std::string_view name);

struct DecodingProfile {
    ProfileName name = ProfileName::chatbot;
    double temperature = 0.9;
    double top_p = 1.0;
    double presence_penalty = 0.0;
    int max_tokens = 512;
    std::optional<int> reasoning_budget;

    static DecodingProfile standard(ProfileName name);
};

/// One chat-completion request. `profile` and `session` are orchestration
/// metadata (never sent on the wire): the profile names the decoding bundle
/// the parameters came from, the session isolates scripted-backend cursors
/// per dialogue.
struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    double top_p = 1.0;
    double presence_penalty = 0.0;
    int max_tokens = 512;
    std::optional<int> reasoning_budget;
    std::string profile;
    std::string session;

    static ChatRequest make(const std::string& model, const DecodingProfile& profile,
                            std::vector<ChatMessage> messages, std::string session = {});
};

void validate(const ChatRequest& request);

struct ChatUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

struct ChatResult {
    std::string text;
    ChatUsage usage;
};

}  // namespace medal::agents
