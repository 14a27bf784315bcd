#include "medal/agents/prompts.hpp"

#include <cctype>

#include "medal/util/errors.hpp"
#include "medal/util/io.hpp"

namespace medal::agents {
namespace {

std::string trim_copy(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

constexpr const char* kFirstTurnSystem =
    R"(You are a creative writer specializing in crafting human-like casual open-domain interactions with chatbots. Your task is to generate the first message a human user might send to a chatbot, based on the following inputs:

1. Scene Description: A small social context or event description.
2. Persona: A brief description of the individual's role, background, or identity.
3. Gender: Gender of the individual if not already provided before.
4. Language/Culture: The language or cultural context of the user.

Guidelines:

- Use natural, conversational language typical of casual, open-domain interactions. Messages should feel authentic and concise, limited to one or two small sentences.
- Do not address the chatbot in a manner that assumes it has a physical body, a personal history, or experiences typical of a human (e.g., having a family, personal secrets, or emotions linked to past events).
- Do not write messages that imply the chatbot is someone the user has met before or can relate to as if it were a human friend.
- Ask for advice, opinions, information, or share personal reflections, experiences, or questions that do not attribute human characteristics to the chatbot.
- Reflect the age, emotional state and language/culture of the individual in tone, word choice, and phrasing.
- Incorporate the context from the scene description without explicitly repeating it word-for-word but subtly integrating its essence or themes.
- Do not use placeholder terms like "PersonY". Use realistic names, pronouns, or generic references suitable for the context.
- If gender is required and not provided in the persona or scene, use the one provided as "Gender".

Output:

Provide only the message that the human might send to a chatbot. Do not include quotation marks, meta-commentary, or any additional text outside of the generated message (including "user:").)";

constexpr const char* kUserTurnSystem =
    R"(You are role-playing as a human in an online casual conversation. Your task is to generate a natural and authentic response given prior context and an optional feedback from a prior generation attempt.

Guidelines:

- Use natural, conversational language that reflects how humans communicate online with chatbots.
- Do not acknowledge that you are an AI or break character as the human in the conversation.
- Keep your single response clear and easy to follow, using short sentences and everyday language. The message should be concise (1 or 2 small sentences) and relevant to the conversation and scene.
- Respond in a way that feels humanlike. Avoid repeating previous content.
- Avoid verbose or robotic phrasing. Do not use the same conversational structure (e.g., starting with appreciation or a personal preference followed by a question) in every turn.
- If gender is required and not provided in the persona or scene, use the one provided as "Gender".
- Use the language specified in the scene.
- Do not use placeholder names like "PersonY". Use realistic names or generic pronouns that suit the context and language.
- Do not let the conversation drag on. If the conversation should end, output 'END_OF_DIALOGUE' to signal the end of the dialogue.
- Take into account the optional feedback from a prior generation attempt, if provided, to improve the response.

Output:

Provide only the message that the human might send to a chatbot. Do not include quotation marks, meta-commentary, or any additional text outside of the generated message (including "user:").)";

constexpr const char* kChatbotSystem =
    R"(You are a chatbot designed to engage in online casual conversations. Your task is to respond to messages directed at you in a way that fosters a smooth, engaging dialogue.

Guidelines:

- Use natural, conversational language that is clear and easy to follow, avoiding overly formal or robotic tones.
- Use the same language as the user.
- Keep your responses concise (1 or 2 sentences) with sentences that are short, easy to follow and relevant -- aim for maintaining conversational flow.
- Avoid steering the conversation towards a specific goal, such as information provision or task completion. Instead, focus on maintaining an engaging dialogue.
- Do not use bullet points or overly structured lists; instead, respond in a fluid, conversational manner.
- Adapt your tone and content to match the style and mood of the conversation.
- Ask questions and introduce new elements or topics when appropriate to keep the exchange interactive, engaging and non-repetitive.)";

constexpr const char* kUserJudgeSystem =
    R"(You are a dialogue evaluation assistant tasked with determining whether a generated response (the last user message) meets the following criteria:

- Natural and Conversational: The response should sound like it was written by a real person in an ordinary online conversation, using language and expressions typical of a user.
- Concise and Coherent: The response should be brief (1-2 sentences), non-repetitive, and coherent with the prior conversation context.
- Appropriate Tone: The response should match the style, language, and mood expected from a user. It should not mimic an assistant's voice by providing advice, guidance, or suggestions that are typically offered by the assistant. Asking for advice or seeking information is acceptable if it aligns with the user's role.
- Role Appropriateness: The response must clearly reflect the user's role. If the response includes elements (e.g., offering support, advice, or asking probing follow-up questions) that are characteristic of an assistant's response, it should be flagged. The user should not break character or acknowledge that they are an AI.
- Non-Repetitiveness: Responses should not repeat of previous content, sentence structures (e.g., starting with appreciation or a personal preference followed by a question), or acknowledgments.
- Ending: The generated response can include the flag "END_OF_DIALOGUE" if the conversation should end. This flag should be used only when the conversation has reached a natural conclusion.

Your task is to evaluate ONLY the last message in the conversation against these criteria.

Output: "Yes." if the user response meets all criteria, or "No. <brief explanation>" if it does not.)";

std::string render_seed_block(const core::SeedContext& seed) {
    std::string block;
    block += "Scene: " + seed.scene_text + "\n";
    block += "Persona: " + seed.persona_text + "\n";
    block += "Affective state: " + seed.affective_state.label + "\n";
    if (seed.gender_hint != core::GenderHint::none)
        block += "Gender: " + std::string(core::gender_hint_name(seed.gender_hint)) + "\n";
    block += "Language/Culture: " + core::language_name(seed.language) + ", as someone from " +
             seed.country + ". Write the message in " + core::language_name(seed.language) + ".";
    return block;
}

}  // namespace

bool is_end_of_dialogue(std::string_view text, bool substring_match) {
    if (substring_match) return text.find(kEndOfDialogueToken) != std::string_view::npos;
    return trim_copy(text) == kEndOfDialogueToken;
}

FewShotExamples FewShotExamples::defaults() {
    FewShotExamples fs;
    fs.examples_["EN"] = {
        "I just got back from a long shift at the hospital and I can't seem to unwind. Any tips "
        "for relaxing in the evening?",
        "Thinking about planting tomatoes on my balcony this spring. Is it hard to keep them "
        "alive?"};
    fs.examples_["ZH"] = {
        "今天加班到很晚，感觉整个人都被掏空了，有什么放松的好办法吗？",
        "我最近想学做饭，你觉得新手先从什么菜开始比较好？"};
    fs.examples_["FR"] = {
        "Je viens de déménager à Lyon et je ne connais personne ici. Des idées pour rencontrer "
        "du monde ?",
        "J'hésite à reprendre la course à pied après des années sans sport, tu aurais des "
        "conseils ?"};
    fs.examples_["DE"] = {
        "Ich habe morgen ein Vorstellungsgespräch und bin ziemlich nervös. Hast du Tipps, wie "
        "ich ruhiger werde?",
        "Mein Balkon ist winzig, aber ich hätte gern ein paar Pflanzen. Was wächst denn da am "
        "besten?"};
    fs.examples_["PT"] = {
        "Acabei de chegar de uma viagem longa e não consigo dormir. Alguma sugestão para "
        "relaxar?",
        "Estou a pensar adotar um gato pela primeira vez. O que é que devo ter em conta?"};
    fs.examples_["ES"] = {
        "Llevo toda la semana durmiendo fatal por el estrés del trabajo. ¿Qué me recomiendas "
        "para desconectar?",
        "Quiero empezar a cocinar más en casa. ¿Algún plato fácil para principiantes?"};
    return fs;
}

FewShotExamples FewShotExamples::load_directory(const std::filesystem::path& dir) {
    FewShotExamples fs = defaults();
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("few-shot directory not found: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        std::string lang = entry.path().stem().string();
        fs.examples_[lang] = read_lines(entry.path());
    }
    return fs;
}

std::string FewShotExamples::block_for(const core::LanguageTag& language) const {
    auto it = examples_.find(language.code);
    if (it == examples_.end() || it->second.empty()) return {};
    std::string block = "Examples:\n";
    for (const auto& example : it->second) block += "\n- " + example;
    return block;
}

PromptPair render_first_turn_prompt(const core::SeedContext& seed,
                                    const FewShotExamples& examples) {
    PromptPair p;
    p.system = kFirstTurnSystem;
    std::string block = examples.block_for(seed.language);
    if (!block.empty()) p.system += "\n\n" + block;
    p.user = "The scene is as follows:\n\n" + render_seed_block(seed);
    return p;
}

std::string render_dialogue_context(const std::vector<core::Turn>& history) {
    std::string out;
    for (const auto& turn : history) {
        out += turn.role == core::Role::user ? "user: " : "chatbot: ";
        out += turn.text;
        out += "\n";
    }
    if (!out.empty()) out.pop_back();
    return out;
}

PromptPair render_user_turn_prompt(const core::SeedContext& seed,
                                   const std::vector<core::Turn>& history,
                                   const std::optional<RejectedAttempt>& rejected) {
    if (history.empty()) throw Error("user turn prompt requires non-empty history");
    if (history.back().role != core::Role::chatbot)
        throw Error("user turn prompt requires history ending with a chatbot turn");
    PromptPair p;
    p.system = kUserTurnSystem;
    p.user = "The scene is as follows:\n\n" + render_seed_block(seed) +
             "\n\nThe Dialogue is as follows:\n\n" + render_dialogue_context(history);
    if (rejected) {
        p.user += "\n\nPrior failed generation attempt was:\n\n" + rejected->text +
                  "\n\nFeedback from this previous generation:\n\n" + rejected->feedback;
    }
    return p;
}

std::vector<ChatMessage> render_chatbot_prompt(const std::vector<core::Turn>& history) {
    if (history.empty()) throw Error("chatbot prompt requires non-empty history");
    if (history.back().role != core::Role::user)
        throw Error("chatbot prompt requires history ending with a user turn");
    std::vector<ChatMessage> messages;
    messages.push_back({MessageRole::system, kChatbotSystem});
    for (const auto& turn : history)
        messages.push_back({turn.role == core::Role::user ? MessageRole::user
                                                          : MessageRole::assistant,
                            turn.text});
    return messages;
}

PromptPair render_user_judge_prompt(const std::vector<core::Turn>& history) {
    if (history.empty()) throw Error("judge prompt requires non-empty history");
    if (history.back().role != core::Role::user)
        throw Error("judge prompt requires the candidate user utterance last");
    PromptPair p;
    p.system = kUserJudgeSystem;
    p.user = render_dialogue_context(history);
    return p;
}

JudgeVerdict parse_verdict(const std::string& text, bool lenient) {
    if (!lenient) {
        std::string tail_trimmed = text;
        while (!tail_trimmed.empty() &&
               std::isspace(static_cast<unsigned char>(tail_trimmed.back())))
            tail_trimmed.pop_back();
        if (tail_trimmed == "Yes.") return {true, std::nullopt};
        if (tail_trimmed.rfind("No.", 0) == 0) {
            std::string feedback = trim_copy(std::string_view(tail_trimmed).substr(3));
            if (feedback.empty()) feedback = "rejected without explanation";
            return {false, feedback};
        }
        throw ProtocolError("judge verdict outside protocol: '" + text + "'");
    }
    std::string t = trim_copy(text);
    std::string lower;
    for (unsigned char c : t) lower += static_cast<char>(std::tolower(c));
    auto boundary_ok = [&](std::size_t len) {
        return lower.size() == len || !std::isalpha(static_cast<unsigned char>(lower[len]));
    };
    if (lower.rfind("yes", 0) == 0 && boundary_ok(3)) return {true, std::nullopt};
    if (lower.rfind("no", 0) == 0 && boundary_ok(2)) {
        std::size_t start = 2;
        while (start < t.size() &&
               (t[start] == '.' || std::isspace(static_cast<unsigned char>(t[start]))))
            ++start;
        std::string feedback = trim_copy(std::string_view(t).substr(start));
        if (feedback.empty()) feedback = "rejected without explanation";
        return {false, feedback};
    }
    return {false, std::string("judge reply did not follow the expected format")};
}

}  // namespace medal::agents
