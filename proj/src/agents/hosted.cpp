#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "medal/agents/backend.hpp"
#include "medal/util/errors.hpp"

namespace medal::agents {
namespace {

struct ParsedUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint must include a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/v1/chat/completions"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

bool is_retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

struct HostedBackend::Impl {
    HostedBackendConfig config;
    ParsedUrl url;

    explicit Impl(HostedBackendConfig cfg) : config(std::move(cfg)), url(split_url(config.endpoint)) {}
};

HostedBackend::HostedBackend(HostedBackendConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

HostedBackend::~HostedBackend() = default;

std::string HostedBackend::describe() const { return "hosted(" + impl_->config.endpoint + ")"; }

std::string HostedBackend::request_body(const ChatRequest& request) {
    nlohmann::ordered_json body;
    body["model"] = request.model;
    nlohmann::ordered_json messages = nlohmann::ordered_json::array();
    for (const auto& m : request.messages)
        messages.push_back(
            {{"role", std::string(message_role_name(m.role))}, {"content", m.content}});
    body["messages"] = std::move(messages);
    body["temperature"] = request.temperature;
    body["top_p"] = request.top_p;
    body["max_tokens"] = request.max_tokens;
    if (request.presence_penalty != 0.0) body["presence_penalty"] = request.presence_penalty;
    if (request.reasoning_budget) body["reasoning_budget"] = *request.reasoning_budget;
    return body.dump();
}

ChatResult HostedBackend::complete(const ChatRequest& request) {
    validate(request);
    const auto& cfg = impl_->config;

    httplib::Client client(impl_->url.base);
    client.set_connection_timeout(cfg.timeout_seconds, 0);
    client.set_read_timeout(cfg.timeout_seconds, 0);

    httplib::Headers headers;
    if (!cfg.api_token.empty()) headers.emplace("Authorization", "Bearer " + cfg.api_token);

    std::string body = request_body(request);
    int attempt = 0;
    std::string last_error;

    while (true) {
        auto res = client.Post(impl_->url.path, headers, body, "application/json");
        if (res) {
            if (res->status == 200) {
                nlohmann::json reply;
                try {
                    reply = nlohmann::json::parse(res->body);
                } catch (const nlohmann::json::exception& e) {
                    throw ProtocolError(std::string("unparseable completion response: ") + e.what());
                }
                if (!reply.contains("choices") || reply["choices"].empty() ||
                    !reply["choices"][0].contains("message"))
                    throw ProtocolError("completion response missing choices[0].message");
                ChatResult result;
                result.text = reply["choices"][0]["message"].value("content", std::string());
                if (reply.contains("usage")) {
                    result.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
                    result.usage.completion_tokens = reply["usage"].value("completion_tokens", 0);
                }
                return result;
            }
            if (res->status == 401 || res->status == 403)
                throw AuthError("authentication failed (HTTP " + std::to_string(res->status) +
                                ") for " + cfg.endpoint);
            if (res->status == 400 && res->body.find("context_length") != std::string::npos)
                throw ContextLengthError("context length exceeded: " + res->body);
            if (!is_retryable_status(res->status))
                throw BackendError("completion failed with HTTP " + std::to_string(res->status) +
                                   ": " + res->body);
            last_error = "HTTP " + std::to_string(res->status);
        } else {
            last_error = httplib::to_string(res.error());
        }

        if (attempt >= cfg.max_retries)
            throw TransportError("transport failed after " + std::to_string(attempt + 1) +
                                 " attempts: " + last_error);
        std::this_thread::sleep_for(
            std::chrono::milliseconds(cfg.backoff_initial_ms * (1 << attempt)));
        ++attempt;
    }
}

}  // namespace medal::agents
