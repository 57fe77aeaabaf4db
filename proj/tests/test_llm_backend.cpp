#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "librelog/errors.hpp"
#include "librelog/llm_backend.hpp"
#include "librelog/prompting.hpp"

using namespace librelog;
using json = nlohmann::json;

TEST_SUITE("llm_backend") {

TEST_CASE("mock_consensus keeps agreeing columns and wildcards the rest") {
    CHECK(mock_consensus({"open file A", "open file B"}) == "open file <*>");
    CHECK(mock_consensus({"x", "x"}) == "x");
    CHECK(mock_consensus({"a b c"}) == "a b c");
    CHECK(mock_consensus({"a b x y", "a c x z"}) == "a <*> x <*>");
    CHECK_THROWS_AS(mock_consensus({"a b", "a b c"}), UnequalTokenLengthError);
    CHECK_THROWS_AS(mock_consensus({}), UnequalTokenLengthError);
}

TEST_CASE("consensus preserves token count and is deterministic") {
    std::vector<std::string> logs{"sent 100 bytes data", "sent 500 bytes data"};
    auto tpl = mock_consensus(logs);
    CHECK(tpl == "sent <*> bytes data");
    CHECK(mock_consensus(logs) == tpl);
}

TEST_CASE("mock backend answers with the backticked consensus") {
    MockBackend mock;
    auto prompt = build_prompt(PromptSpec::for_logs({"sent 100 bytes data",
                                                     "sent 500 bytes data"}));
    auto result = mock.complete(prompt);
    CHECK(result.text == "`sent <*> bytes data`");
    CHECK(result.latency_ms >= 0.0);

    auto single = mock.complete(build_prompt(PromptSpec::for_logs({"a b c"})));
    CHECK(single.text == "`a b c`");
}

TEST_CASE("mock backend rejects prompts without a parsable log list") {
    MockBackend mock;
    CHECK_THROWS_AS(mock.complete("no list here"), MalformedLogListError);
    CHECK_THROWS_AS(mock.complete("Log list: [not json"), MalformedLogListError);
    // unequal token lengths inside the list
    auto prompt = build_prompt(PromptSpec::for_logs({"a b", "a b c"}));
    CHECK_THROWS_AS(mock.complete(prompt), MalformedLogListError);
}

TEST_CASE("http backend speaks the chat-completions protocol") {
    httplib::Server server;
    json seen_body;
    std::string seen_auth;
    server.Post("/v1/chat/completions",
                [&](const httplib::Request& req, httplib::Response& res) {
                    seen_body = json::parse(req.body);
                    seen_auth = req.get_header_value("Authorization");
                    json reply = {
                        {"choices",
                         json::array({json{{"message", json{{"content", "`x <*> y`"}}}}})}};
                    res.set_content(reply.dump(), "application/json");
                });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    setenv("LIBRELOG_API_KEY", "secret-key", 1);
    BackendConfig cfg;
    cfg.kind = BackendKind::http;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.model_name = "test-model";
    cfg.timeout_ms = 5000;
    cfg.max_retries = 0;
    HttpBackend backend(cfg);

    auto result = backend.complete("parse this please");
    CHECK(result.text == "`x <*> y`");
    CHECK(result.latency_ms >= 0.0);
    CHECK(seen_body["model"] == "test-model");
    CHECK(seen_body["temperature"] == 0.0);
    REQUIRE(seen_body["messages"].size() == 1);
    CHECK(seen_body["messages"][0]["role"] == "user");
    CHECK(seen_body["messages"][0]["content"] == "parse this please");
    CHECK(seen_auth == "Bearer secret-key");
    CHECK(backend.reachable());

    unsetenv("LIBRELOG_API_KEY");
    server.stop();
    server_thread.join();
}

TEST_CASE("http backend reports malformed responses") {
    httplib::Server server;
    server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"unexpected\": true}", "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    BackendConfig cfg;
    cfg.kind = BackendKind::http;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.max_retries = 0;
    HttpBackend backend(cfg);
    CHECK_THROWS_AS(backend.complete("p"), MalformedResponseError);

    server.stop();
    server_thread.join();
}

TEST_CASE("http backend retries transport failures then gives up") {
    BackendConfig cfg;
    cfg.kind = BackendKind::http;
    cfg.base_url = "http://127.0.0.1:1";  // nothing listens on port 1
    cfg.timeout_ms = 500;
    cfg.max_retries = 1;
    HttpBackend backend(cfg);
    auto start = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(backend.complete("p"), TransportError);
    auto elapsed = std::chrono::steady_clock::now() - start;
    // one retry after a 500 ms backoff; connection refusal itself is fast
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 5000);
    CHECK(!backend.reachable());
}

TEST_CASE("server errors count as transport failures and are retried") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 500;
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    BackendConfig cfg;
    cfg.kind = BackendKind::http;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.max_retries = 1;
    HttpBackend backend(cfg);
    CHECK_THROWS_AS(backend.complete("p"), TransportError);
    CHECK(hits.load() == 2);  // initial attempt + one retry

    server.stop();
    server_thread.join();
}

TEST_CASE("base URLs with a path prefix are honored") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/serve/v1/chat/completions",
                [&](const httplib::Request&, httplib::Response& res) {
                    ++hits;
                    json reply = {
                        {"choices", json::array({json{{"message", json{{"content", "ok"}}}}})}};
                    res.set_content(reply.dump(), "application/json");
                });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    BackendConfig cfg;
    cfg.kind = BackendKind::http;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/serve";
    cfg.max_retries = 0;
    HttpBackend backend(cfg);
    CHECK(backend.complete("p").text == "ok");
    CHECK(hits.load() == 1);

    server.stop();
    server_thread.join();
}

} // TEST_SUITE
