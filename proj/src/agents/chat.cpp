#include "medal/agents/chat.hpp"

#include "medal/util/errors.hpp"

namespace medal::agents {

std::string_view message_role_name(MessageRole role) {
    switch (role) {
        case MessageRole::system: return "system";
        case MessageRole::user: return "user";
        case MessageRole::assistant: return "assistant";
    }
    return "user";
}

std::string_view profile_name(ProfileName name) {
    switch (name) {
        case ProfileName::user_first: return "user_first";
        case ProfileName::user_next: return "user_next";
        case ProfileName::user_judge: return "user_judge";
        case ProfileName::chatbot: return "chatbot";
        case ProfileName::strong_judge: return "strong_judge";
        case ProfileName::meta_eval: return "meta_eval";
        case ProfileName::meta_eval_reasoning: return "meta_eval_reasoning";
    }
    return "chatbot";
}

std::optional<ProfileName> profile_from_name(std::string_view name) {
    for (auto p : {ProfileName::user_first, ProfileName::user_next, ProfileName::user_judge,
                   ProfileName::chatbot, ProfileName::strong_judge, ProfileName::meta_eval,
                   ProfileName::meta_eval_reasoning})
        if (profile_name(p) == name) return p;
    return std::nullopt;
}

DecodingProfile DecodingProfile::standard(ProfileName name) {
    DecodingProfile p;
    p.name = name;
    switch (name) {
        case ProfileName::user_first:
            // high temperature + presence penalty to maximize starter diversity
            p.temperature = 1.5;
            p.top_p = 1.0;
            p.presence_penalty = 0.6;
            p.max_tokens = 512;
            break;
        case ProfileName::user_next:
        case ProfileName::chatbot:
            p.temperature = 0.9;
            p.top_p = 0.95;
            p.max_tokens = 512;
            break;
        case ProfileName::user_judge:
            // near-greedy, short budget to force brief feedback
            p.temperature = 0.1;
            p.top_p = 1.0;
            p.max_tokens = 64;
            break;
        case ProfileName::strong_judge:
        case ProfileName::meta_eval:
            p.temperature = 0.0;
            p.top_p = 1.0;
            p.max_tokens = 8192;
            break;
        case ProfileName::meta_eval_reasoning:
            p.temperature = 0.0;
            p.top_p = 1.0;
            p.max_tokens = 32768;
            p.reasoning_budget = 32768;
            break;
    }
    return p;
}

ChatRequest ChatRequest::make(const std::string& model, const DecodingProfile& profile,
                              std::vector<ChatMessage> messages, std::string session) {
    ChatRequest r;
    r.model = model;
    r.messages = std::move(messages);
    r.temperature = profile.temperature;
    r.top_p = profile.top_p;
    r.presence_penalty = profile.presence_penalty;
    r.max_tokens = profile.max_tokens;
    r.reasoning_budget = profile.reasoning_budget;
    r.profile = std::string(profile_name(profile.name));
    r.session = std::move(session);
    validate(r);
    return r;
}

void validate(const ChatRequest& request) {
    if (request.model.empty()) throw SchemaError("model", "request model must be non-empty");
    if (request.messages.empty()) throw SchemaError("messages", "request has no messages");
    for (std::size_t i = 1; i < request.messages.size(); ++i)
        if (request.messages[i].role == MessageRole::system)
            throw SchemaError("messages", "system message only allowed first");
    if (request.temperature < 0) throw SchemaError("temperature", "temperature must be >= 0");
    if (request.top_p <= 0 || request.top_p > 1)
        throw SchemaError("top_p", "top_p must be in (0, 1]");
    if (request.max_tokens <= 0) throw SchemaError("max_tokens", "max_tokens must be > 0");
}

}  // namespace medal::agents
