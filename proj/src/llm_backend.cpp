#include "librelog/llm_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "librelog/errors.hpp"
#include "librelog/preprocess.hpp"
#include "librelog/prompting.hpp"

namespace librelog {

using json = nlohmann::json;
using clock_type = std::chrono::steady_clock;

namespace {

double elapsed_ms(clock_type::time_point start) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

} // namespace

BackendKind backend_kind_from_string(const std::string& name) {
    if (name == "http") return BackendKind::http;
    if (name == "mock") return BackendKind::mock;
    throw Error("unknown backend kind: " + name);
}

std::string mock_consensus(const std::vector<std::string>& logs) {
    if (logs.empty()) {
        throw UnequalTokenLengthError("consensus needs at least one log");
    }
    std::vector<std::vector<std::string>> token_rows;
    token_rows.reserve(logs.size());
    for (const auto& log : logs) {
        token_rows.push_back(tokenize(log));
        if (token_rows.back().size() != token_rows.front().size()) {
            throw UnequalTokenLengthError("logs have unequal token lengths (" +
                                          std::to_string(token_rows.front().size()) + " vs " +
                                          std::to_string(token_rows.back().size()) + ")");
        }
    }
    std::string out;
    for (std::size_t col = 0; col < token_rows.front().size(); ++col) {
        bool agree = true;
        for (std::size_t row = 1; row < token_rows.size() && agree; ++row) {
            agree = token_rows[row][col] == token_rows.front()[col];
        }
        if (col > 0) {
            out.push_back(' ');
        }
        out += agree ? token_rows.front()[col] : std::string(kWildcard);
    }
    return out;
}

CompletionResult MockBackend::complete(const std::string& prompt) {
    auto start = clock_type::now();
    std::size_t marker = prompt.rfind(kLogListPrefix);
    if (marker == std::string::npos) {
        throw MalformedLogListError("prompt has no log list");
    }
    std::vector<std::string> logs;
    try {
        json list = json::parse(prompt.substr(marker + kLogListPrefix.size()));
        if (!list.is_array() || list.empty()) {
            throw MalformedLogListError("log list is not a non-empty array");
        }
        for (const auto& item : list) {
            logs.push_back(item.get<std::string>());
        }
    } catch (const json::exception& e) {
        throw MalformedLogListError(std::string("cannot parse log list: ") + e.what());
    }

    std::string tpl;
    try {
        tpl = mock_consensus(logs);
    } catch (const Error& e) {
        throw MalformedLogListError(std::string("bad log list: ") + e.what());
    }

    CompletionResult result;
    result.text = "`" + tpl + "`";
    result.latency_ms = elapsed_ms(start);
    return result;
}

HttpBackend::HttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
    // Split an optional path prefix off the base URL; httplib clients take
    // scheme://host:port only.
    std::string url = cfg_.base_url;
    std::size_t scheme_end = url.find("://");
    std::size_t path_start =
        url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        host_ = url;
    } else {
        host_ = url.substr(0, path_start);
        path_prefix_ = url.substr(path_start);
        while (!path_prefix_.empty() && path_prefix_.back() == '/') {
            path_prefix_.pop_back();
        }
    }
}

CompletionResult HttpBackend::complete(const std::string& prompt) {
    auto start = clock_type::now();

    json body = {
        {"model", cfg_.model_name},
        {"temperature", BackendConfig::temperature},
        {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
    };
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (const char* key = std::getenv("LIBRELOG_API_KEY")) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    std::string last_error;
    int backoff_ms = 500;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
        // One client per request keeps concurrent completions independent.
        httplib::Client client(host_);
        client.set_connection_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        client.set_read_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        client.set_write_timeout(std::chrono::milliseconds(cfg_.timeout_ms));

        auto res = client.Post(path_prefix_ + "/v1/chat/completions", headers, payload,
                               "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        try {
            json reply = json::parse(res->body);
            CompletionResult result;
            result.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
            result.latency_ms = elapsed_ms(start);
            return result;
        } catch (const json::exception& e) {
            throw MalformedResponseError(std::string("response missing message content: ") +
                                         e.what());
        }
    }
    throw TransportError("backend unreachable after " + std::to_string(cfg_.max_retries + 1) +
                         " attempts: " + last_error);
}

bool HttpBackend::reachable() const {
    httplib::Client client(host_);
    client.set_connection_timeout(std::chrono::seconds(5));
    client.set_read_timeout(std::chrono::seconds(5));
    auto res = client.Get(path_prefix_ + "/v1/models");
    return res != nullptr;
}

std::unique_ptr<LlmBackend> make_backend(const BackendConfig& cfg) {
    if (cfg.kind == BackendKind::http) {
        return std::make_unique<HttpBackend>(cfg);
    }
    return std::make_unique<MockBackend>();
}

} // namespace librelog
