#include "taxoalign/errors.hpp"
#include "taxoalign/gateway.hpp"

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <random>

using namespace taxoalign;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("taxoalign_gw_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

struct FlakyBackend : ChatBackend {
    std::atomic<int> calls{0};
    int fail_first_n;
    explicit FlakyBackend(int n) : fail_first_n(n) {}
    ChatResponse complete(const ChatRequest&) override {
        if (calls.fetch_add(1) < fail_first_n)
            throw GatewayError("transient failure");
        return {"ok", true};
    }
};

ChatRequest sample_request() {
    ChatRequest req;
    req.system_or_instruction = "be terse";
    req.user_content = "hello";
    req.model_id = "model-x";
    return req;
}

} // namespace

TEST_CASE("request hash is stable and input-sensitive") {
    ChatRequest req = sample_request();
    std::string h1 = request_hash(req);
    CHECK(h1 == request_hash(req));
    CHECK(h1.size() == 16);

    ChatRequest other = req;
    other.user_content = "hello!";
    CHECK(request_hash(other) != h1);
    other = req;
    other.temperature = 0.5;
    CHECK(request_hash(other) != h1);
    other = req;
    other.max_new_tokens = 512;
    CHECK(request_hash(other) != h1);
}

TEST_CASE("replay backend round trip") {
    TempDir dir;
    ChatRequest req = sample_request();
    ReplayBackend::write_fixture(dir.path.string(), req, {"recorded text", true});

    ReplayBackend replay(dir.path.string());
    auto resp = replay.complete(req);
    CHECK(resp.text == "recorded text");
    CHECK(resp.finished);
    // bit-exact on repeat
    CHECK(replay.complete(req).text == resp.text);

    ChatRequest unknown = req;
    unknown.user_content = "never recorded";
    CHECK_THROWS_AS(replay.complete(unknown), MissingFixture);
}

TEST_CASE("recording backend writes replayable fixtures") {
    TempDir dir;
    auto inner = std::make_shared<FlakyBackend>(0);
    RecordingBackend recorder(inner, dir.path.string());
    ChatRequest req = sample_request();
    CHECK(recorder.complete(req).text == "ok");

    ReplayBackend replay(dir.path.string());
    CHECK(replay.complete(req).text == "ok");
}

TEST_CASE("gateway retries transient failures with backoff") {
    auto flaky = std::make_shared<FlakyBackend>(2);
    Gateway gateway(flaky, {3, 0.001, 2});
    CHECK(gateway.chat_complete(sample_request()).text == "ok");
    CHECK(flaky->calls == 3);
}

TEST_CASE("gateway gives up after the retry cap") {
    auto flaky = std::make_shared<FlakyBackend>(100);
    Gateway gateway(flaky, {2, 0.001, 2});
    CHECK_THROWS_AS(gateway.chat_complete(sample_request()), GatewayError);
    CHECK(flaky->calls == 3); // initial try + 2 retries
}

TEST_CASE("gateway does not retry missing fixtures") {
    TempDir dir;
    Gateway gateway(std::make_shared<ReplayBackend>(dir.path.string()), {5, 0.001, 2});
    CHECK_THROWS_AS(gateway.chat_complete(sample_request()), MissingFixture);
}

TEST_CASE("chat request defaults") {
    ChatRequest req;
    CHECK(req.max_new_tokens == 1024);
    CHECK(req.temperature == 0.0);
}
