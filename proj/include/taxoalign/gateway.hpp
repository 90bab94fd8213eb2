#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace taxoalign {

struct ChatRequest {
    std::string system_or_instruction;
    std::string user_content;
    int max_new_tokens = 1024;
    double temperature = 0.0;
    std::string model_id;
};

struct ChatResponse {
    std::string text;
    bool finished = true;
};

/// Stable request identity: FNV-1a 64 over the canonical JSON serialization
/// of the request. Identical across runs and platforms.
std::string request_hash(const ChatRequest& request);
std::string text_hash(const std::string& text);

/// One chat-completion backend. Implementations must be safe to share
/// between threads.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

/// Answers every request from a directory of JSON fixtures named by request
/// hash. Fully deterministic and network-free; throws MissingFixture for
/// unknown requests.
class ReplayBackend : public ChatBackend {
public:
    explicit ReplayBackend(std::string fixture_dir);
    ChatResponse complete(const ChatRequest& request) override;

    /// Writes one fixture; used by record mode and fixture generators.
    static void write_fixture(const std::string& fixture_dir, const ChatRequest& request,
                              const ChatResponse& response);

private:
    std::string dir_;
};

/// Forwards to an inner backend and records every exchange as a replay
/// fixture.
class RecordingBackend : public ChatBackend {
public:
    RecordingBackend(std::shared_ptr<ChatBackend> inner, std::string fixture_dir);
    ChatResponse complete(const ChatRequest& request) override;

private:
    std::shared_ptr<ChatBackend> inner_;
    std::string dir_;
};

struct HttpBackendConfig {
    std::string base_url;
    std::string auth_token_env;
    int timeout_seconds = 120;
};

/// Talks the standard chat-completions HTTP schema; any compatible endpoint
/// (hosted or local) works, with the model selected per request.
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(HttpBackendConfig config);
    ChatResponse complete(const ChatRequest& request) override;

private:
    HttpBackendConfig config_;
};

struct GatewayConfig {
    int max_retries = 3;
    double initial_backoff_seconds = 0.5;
    int max_concurrent_requests = 4;
};

/// Retry/rate-limit wrapper around a backend. chat_complete retries
/// transient failures with exponential backoff; in-flight request count is
/// capped by config.
class Gateway {
public:
    Gateway(std::shared_ptr<ChatBackend> backend, GatewayConfig config = {});
    ChatResponse chat_complete(const ChatRequest& request);

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

} // namespace taxoalign
