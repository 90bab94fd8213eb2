#include "taxoalign/gateway.hpp"
#include "taxoalign/errors.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#ifdef TAXOALIGN_WITH_HTTP
#include <httplib.h>
#endif

namespace taxoalign {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << v;
    return out.str();
}

nlohmann::json canonical_request(const ChatRequest& r) {
    // nlohmann::json objects keep keys sorted, so dump() is canonical
    nlohmann::json j;
    j["instruction"] = r.system_or_instruction;
    j["content"] = r.user_content;
    j["max_new_tokens"] = r.max_new_tokens;
    j["temperature"] = r.temperature;
    j["model_id"] = r.model_id;
    return j;
}

} // namespace

std::string request_hash(const ChatRequest& request) {
    return hex64(fnv1a64(canonical_request(request).dump()));
}

std::string text_hash(const std::string& text) {
    return hex64(fnv1a64(text));
}

ReplayBackend::ReplayBackend(std::string fixture_dir) : dir_(std::move(fixture_dir)) {}

ChatResponse ReplayBackend::complete(const ChatRequest& request) {
    auto path = std::filesystem::path(dir_) / (request_hash(request) + ".json");
    std::ifstream in(path);
    if (!in)
        throw MissingFixture("no fixture " + path.string() + " for model " + request.model_id);
    auto j = nlohmann::json::parse(in);
    ChatResponse resp;
    resp.text = j.at("response").at("text").get<std::string>();
    resp.finished = j.at("response").value("finished", true);
    return resp;
}

void ReplayBackend::write_fixture(const std::string& fixture_dir, const ChatRequest& request,
                                  const ChatResponse& response) {
    std::filesystem::create_directories(fixture_dir);
    nlohmann::json j;
    j["request"] = canonical_request(request);
    j["response"]["text"] = response.text;
    j["response"]["finished"] = response.finished;
    auto path = std::filesystem::path(fixture_dir) / (request_hash(request) + ".json");
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

RecordingBackend::RecordingBackend(std::shared_ptr<ChatBackend> inner, std::string fixture_dir)
    : inner_(std::move(inner)), dir_(std::move(fixture_dir)) {}

ChatResponse RecordingBackend::complete(const ChatRequest& request) {
    ChatResponse resp = inner_->complete(request);
    ReplayBackend::write_fixture(dir_, request, resp);
    return resp;
}

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {}

ChatResponse HttpChatBackend::complete(const ChatRequest& request) {
#ifndef TAXOALIGN_WITH_HTTP
    (void)request;
    throw GatewayError("built without HTTP support");
#else
    nlohmann::json body;
    body["model"] = request.model_id;
    body["max_tokens"] = request.max_new_tokens;
    body["temperature"] = request.temperature;
    body["messages"] = nlohmann::json::array();
    if (!request.system_or_instruction.empty())
        body["messages"].push_back({{"role", "system"}, {"content", request.system_or_instruction}});
    body["messages"].push_back({{"role", "user"}, {"content", request.user_content}});

    httplib::Client client(config_.base_url);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.auth_token_env.empty()) {
        const char* token = std::getenv(config_.auth_token_env.c_str());
        if (token) headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) throw GatewayError("no response from " + config_.base_url);
    if (res->status == 429 || res->status >= 500)
        throw GatewayError("transient endpoint error: " + std::to_string(res->status));
    if (res->status != 200)
        throw GatewayError("endpoint error " + std::to_string(res->status) + ": " + res->body);
    auto j = nlohmann::json::parse(res->body);
    const auto& choice = j.at("choices").at(0);
    ChatResponse resp;
    resp.text = choice.at("message").at("content").get<std::string>();
    resp.finished = choice.value("finish_reason", "stop") != "length";
    return resp;
#endif
}

struct Gateway::Impl {
    std::shared_ptr<ChatBackend> backend;
    GatewayConfig config;
    std::mutex mutex;
    std::condition_variable slot_free;
    int in_flight = 0;
};

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, GatewayConfig config)
    : impl_(std::make_shared<Impl>()) {
    impl_->backend = std::move(backend);
    impl_->config = config;
}

ChatResponse Gateway::chat_complete(const ChatRequest& request) {
    {
        std::unique_lock lock(impl_->mutex);
        impl_->slot_free.wait(lock, [&] {
            return impl_->in_flight < impl_->config.max_concurrent_requests;
        });
        ++impl_->in_flight;
    }
    struct Release {
        Impl* impl;
        ~Release() {
            std::lock_guard lock(impl->mutex);
            --impl->in_flight;
            impl->slot_free.notify_one();
        }
    } release{impl_.get()};

    double backoff = impl_->config.initial_backoff_seconds;
    std::string last_error;
    for (int attempt = 0; attempt <= impl_->config.max_retries; ++attempt) {
        try {
            return impl_->backend->complete(request);
        } catch (const MissingFixture&) {
            throw; // replay misses are permanent, retrying cannot help
        } catch (const Error& e) {
            last_error = e.what();
        }
        if (attempt < impl_->config.max_retries) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
            backoff *= 2;
        }
    }
    throw GatewayError("retries exhausted: " + last_error);
}

} // namespace taxoalign
