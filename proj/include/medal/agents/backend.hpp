#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "medal/agents/chat.hpp"

namespace medal::agents {

/// A chat-completion endpoint. Implementations must be safe to call from
/// multiple worker threads at once.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResult complete(const ChatRequest& request) = 0;
    virtual std::string describe() const = 0;
};

using BackendPtr = std::shared_ptr<ChatBackend>;

// ---------------------------------------------------------------------------
// Scripted backend (the deterministic test oracle)
// ---------------------------------------------------------------------------

/// One scripted rule. Rules are consulted in order; the first rule that
/// matches the request's profile, per-(session, profile) call index, and
/// pattern (substring of the last message) and still has repeat budget left
/// produces the response. Budget is tracked per session so concurrent
/// dialogues replay independently.
struct ScriptRule {
    std::optional<std::string> profile;  // absent = any profile
    std::optional<int> index;            // absent = any call index
    std::optional<std::string> pattern;  // absent = any content
    std::string response;
    int repeat = 1;  // -1 = unlimited

    static ScriptRule constant(std::string profile, std::string response);
    static ScriptRule once(std::string profile, std::string response);
};

struct LoggedRequest {
    ChatRequest request;
    std::string response;
};

class ScriptedBackend : public ChatBackend {
public:
    explicit ScriptedBackend(std::vector<ScriptRule> rules);

    /// Loads JSONL rules: {"profile": ..., "index": ..., "pattern": ...,
    /// "response": ..., "repeat": ...}; only "response" is required.
    static std::shared_ptr<ScriptedBackend> load(const std::filesystem::path& path);

    ChatResult complete(const ChatRequest& request) override;
    std::string describe() const override { return "scripted"; }

    std::vector<LoggedRequest> log() const;
    std::size_t call_count() const;
    std::size_t call_count(std::string_view profile) const;

private:
    struct SessionState {
        std::map<std::string, int> calls_by_profile;
        std::vector<int> consumed;  // per rule
    };

    std::vector<ScriptRule> rules_;
    mutable std::mutex mutex_;
    std::map<std::string, SessionState> sessions_;
    std::vector<LoggedRequest> log_;
};

/// Convenience script: reject a user-judge candidate k times, then accept
/// everything after that.
std::vector<ScriptRule> reject_k_then_accept(int k, const std::string& feedback = "Sounds like an assistant.");

// ---------------------------------------------------------------------------
// Hosted backend (JSON chat-completions over HTTP)
// ---------------------------------------------------------------------------

struct HostedBackendConfig {
    std::string endpoint;   // full URL, e.g. http://host:port/v1/chat/completions
    std::string api_token;  // resolved from the environment by the caller
    int max_retries = 3;    // transient transport failures only
    int backoff_initial_ms = 200;
    int timeout_seconds = 120;
};

/// Speaks the de facto JSON chat-completions protocol: POST {model,
/// messages[], temperature, top_p, max_tokens, ...}. Transient transport
/// failures (connect errors, 429, 5xx) retry with exponential backoff;
/// protocol errors (auth, context length, malformed replies) never retry.
class HostedBackend : public ChatBackend {
public:
    explicit HostedBackend(HostedBackendConfig config);
    ~HostedBackend() override;

    ChatResult complete(const ChatRequest& request) override;
    std::string describe() const override;

    /// Request body serialization, exposed for wire-format tests.
    static std::string request_body(const ChatRequest& request);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Transcript record / replay
// ---------------------------------------------------------------------------

/// Deterministic fingerprint of a request's wire-visible content.
std::uint64_t request_fingerprint(const ChatRequest& request);

/// Wraps another backend and appends {fingerprint, response} JSONL records
/// to a transcript file as calls complete.
class RecordingBackend : public ChatBackend {
public:
    RecordingBackend(BackendPtr inner, std::filesystem::path transcript_path);
    ~RecordingBackend() override;

    ChatResult complete(const ChatRequest& request) override;
    std::string describe() const override { return "recording(" + inner_->describe() + ")"; }

    void flush();

private:
    BackendPtr inner_;
    std::filesystem::path path_;
    std::mutex mutex_;
    std::string buffer_;
};

/// Replays a recorded transcript: responses are matched by request
/// fingerprint (FIFO per fingerprint), so replay does not depend on the
/// original completion order.
class ReplayBackend : public ChatBackend {
public:
    explicit ReplayBackend(const std::filesystem::path& transcript_path);

    ChatResult complete(const ChatRequest& request) override;
    std::string describe() const override { return "replay"; }

private:
    std::mutex mutex_;
    std::map<std::uint64_t, std::vector<std::string>> responses_;
    std::map<std::uint64_t, std::size_t> cursor_;
};

}  // namespace medal::agents
