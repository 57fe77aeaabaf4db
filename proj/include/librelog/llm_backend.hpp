#pragma once

#include <memory>
#include <string>
#include <vector>

namespace librelog {

enum class BackendKind { http, mock };

BackendKind backend_kind_from_string(const std::string& name);

struct BackendConfig {
    BackendKind kind = BackendKind::mock;
    std::string base_url;    // http only, e.g. http://127.0.0.1:8000
    std::string model_name;  // http only
    int timeout_ms = 120000;
    int max_retries = 2;

    /// Generation temperature is pinned to zero so identical runs produce
    /// identical output; it is deliberately not configurable.
    static constexpr double temperature = 0.0;
};

struct CompletionResult {
    std::string text;
    double latency_ms = 0.0;
};

/// Uniform completion interface. Implementations must be usable from
/// multiple threads concurrently.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;

    /// Throws TransportError, MalformedResponseError or (mock)
    /// MalformedLogListError.
    virtual CompletionResult complete(const std::string& prompt) = 0;
};

/// Column consensus over equal-token-length logs: a position keeps its token
/// when all logs agree, otherwise becomes <*>. Adjacent wildcards are not
/// merged. Throws UnequalTokenLengthError.
std::string mock_consensus(const std::vector<std::string>& logs);

/// Deterministic offline oracle: parses the prompt's log list and answers
/// with the column-consensus template wrapped in backticks, exercising the
/// same post-processing path as a live model.
class MockBackend final : public LlmBackend {
public:
    CompletionResult complete(const std::string& prompt) override;
};

/// OpenAI-compatible chat-completions client. POSTs the prompt as a single
/// user message to {base_url}/v1/chat/completions and returns the first
/// choice's message content verbatim. Retries transport failures with
/// exponential backoff (500 ms, doubling). Sends Authorization: Bearer
/// $LIBRELOG_API_KEY when the variable is set.
class HttpBackend final : public LlmBackend {
public:
    explicit HttpBackend(BackendConfig cfg);
    CompletionResult complete(const std::string& prompt) override;

    /// True when the endpoint answers anything at all; used as a startup probe.
    bool reachable() const;

private:
    BackendConfig cfg_;
    std::string host_;         // scheme://host[:port]
    std::string path_prefix_;  // optional path component of base_url
};

std::unique_ptr<LlmBackend> make_backend(const BackendConfig& cfg);

} // namespace librelog
