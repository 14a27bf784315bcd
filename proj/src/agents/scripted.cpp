#include <json.hpp>

#include "medal/agents/backend.hpp"
#include "medal/util/errors.hpp"
#include "medal/util/io.hpp"
#include "medal/util/rng.hpp"

namespace medal::agents {

ScriptRule ScriptRule::constant(std::string profile, std::string response) {
    ScriptRule r;
    r.profile = std::move(profile);
    r.response = std::move(response);
    r.repeat = -1;
    return r;
}

ScriptRule ScriptRule::once(std::string profile, std::string response) {
    ScriptRule r;
    r.profile = std::move(profile);
    r.response = std::move(response);
    r.repeat = 1;
    return r;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptRule> rules) : rules_(std::move(rules)) {}

std::shared_ptr<ScriptedBackend> ScriptedBackend::load(const std::filesystem::path& path) {
    std::vector<ScriptRule> rules;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        ScriptRule rule;
        if (j.contains("profile")) rule.profile = j["profile"].get<std::string>();
        if (j.contains("index")) rule.index = j["index"].get<int>();
        if (j.contains("pattern")) rule.pattern = j["pattern"].get<std::string>();
        if (!j.contains("response"))
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": script rule missing 'response'");
        rule.response = j["response"].get<std::string>();
        rule.repeat = j.value("repeat", 1);
        rules.push_back(std::move(rule));
    });
    return std::make_shared<ScriptedBackend>(std::move(rules));
}

ChatResult ScriptedBackend::complete(const ChatRequest& request) {
    validate(request);
    std::lock_guard<std::mutex> lock(mutex_);
    SessionState& session = sessions_[request.session];
    if (session.consumed.empty()) session.consumed.assign(rules_.size(), 0);

    int call_index = session.calls_by_profile[request.profile]++;
    const std::string& last_content = request.messages.back().content;

    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const ScriptRule& rule = rules_[i];
        if (rule.profile && *rule.profile != request.profile) continue;
        if (rule.index && *rule.index != call_index) continue;
        if (rule.pattern && last_content.find(*rule.pattern) == std::string::npos) continue;
        if (rule.repeat >= 0 && session.consumed[i] >= rule.repeat) continue;
        ++session.consumed[i];
        ChatResult result;
        result.text = rule.response;
        result.usage.prompt_tokens = 0;
        result.usage.completion_tokens =
            static_cast<std::int64_t>(rule.response.size());
        log_.push_back({request, result.text});
        return result;
    }
    throw ScriptExhaustedError("script exhausted for profile '" + request.profile +
                               "', session '" + request.session + "', call index " +
                               std::to_string(call_index));
}

std::vector<LoggedRequest> ScriptedBackend::log() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return log_;
}

std::size_t ScriptedBackend::call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return log_.size();
}

std::size_t ScriptedBackend::call_count(std::string_view profile) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::size_t n = 0;
    for (const auto& entry : log_)
        if (entry.request.profile == profile) ++n;
    return n;
}

std::vector<ScriptRule> reject_k_then_accept(int k, const std::string& feedback) {
    std::vector<ScriptRule> rules;
    if (k > 0) {
        ScriptRule reject;
        reject.profile = "user_judge";
        reject.response = "No. " + feedback;
        reject.repeat = k;
        rules.push_back(std::move(reject));
    }
    rules.push_back(ScriptRule::constant("user_judge", "Yes."));
    return rules;
}

// ---------------------------------------------------------------------------
// Transcripts
// ---------------------------------------------------------------------------

std::uint64_t request_fingerprint(const ChatRequest& request) {
    nlohmann::ordered_json j;
    j["model"] = request.model;
    j["profile"] = request.profile;
    j["temperature"] = request.temperature;
    j["top_p"] = request.top_p;
    j["presence_penalty"] = request.presence_penalty;
    j["max_tokens"] = request.max_tokens;
    if (request.reasoning_budget) j["reasoning_budget"] = *request.reasoning_budget;
    nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
    for (const auto& m : request.messages)
        msgs.push_back({{"role", std::string(message_role_name(m.role))}, {"content", m.content}});
    j["messages"] = std::move(msgs);
    return fnv1a64(j.dump());
}

RecordingBackend::RecordingBackend(BackendPtr inner, std::filesystem::path transcript_path)
    : inner_(std::move(inner)), path_(std::move(transcript_path)) {}

RecordingBackend::~RecordingBackend() {
    try {
        flush();
    } catch (...) {
    }
}

ChatResult RecordingBackend::complete(const ChatRequest& request) {
    ChatResult result = inner_->complete(request);
    nlohmann::ordered_json j;
    j["fingerprint"] = request_fingerprint(request);
    j["profile"] = request.profile;
    j["response"] = result.text;
    std::lock_guard<std::mutex> lock(mutex_);
    buffer_ += j.dump();
    buffer_ += "\n";
    return result;
}

void RecordingBackend::flush() {
    std::lock_guard<std::mutex> lock(mutex_);
    write_file_atomic(path_, buffer_);
}

ReplayBackend::ReplayBackend(const std::filesystem::path& transcript_path) {
    for_each_line(transcript_path, [&](std::size_t lineno, const std::string& line) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(transcript_path.string() + ":" + std::to_string(lineno) + ": " +
                              e.what());
        }
        responses_[j.at("fingerprint").get<std::uint64_t>()].push_back(
            j.at("response").get<std::string>());
    });
}

ChatResult ReplayBackend::complete(const ChatRequest& request) {
    std::uint64_t fp = request_fingerprint(request);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = responses_.find(fp);
    std::size_t& pos = cursor_[fp];
    if (it == responses_.end() || pos >= it->second.size())
        throw TransportError("transcript has no response for request (profile '" +
                             request.profile + "')");
    ChatResult result;
    result.text = it->second[pos++];
    return result;
}

}  // namespace medal::agents
