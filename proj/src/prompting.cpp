#include "librelog/prompting.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "librelog/errors.hpp"

namespace librelog {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool strip_prefix_ci(std::string& text, std::string_view prefix) {
    if (text.size() < prefix.size()) {
        return false;
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    text = trim(std::string_view(text).substr(prefix.size()));
    return true;
}

} // namespace

PromptSpec PromptSpec::for_logs(std::vector<std::string> logs) {
    PromptSpec spec;
    spec.log_list = std::move(logs);
    return spec;
}

std::string build_prompt(const PromptSpec& spec) {
    if (spec.log_list.empty()) {
        throw EmptyLogListError("prompt needs at least one log");
    }
    std::string list = "[";
    for (std::size_t i = 0; i < spec.log_list.size(); ++i) {
        if (i > 0) {
            list += ", ";
        }
        // JSON string encoding escapes quotes, backslashes and control chars,
        // so the mock backend can parse the list back verbatim.
        list += nlohmann::json(spec.log_list[i]).dump();
    }
    list += "]";

    std::string prompt;
    prompt += spec.instruction;
    prompt += "\n\n";
    prompt += "Input: ";
    prompt += spec.example_input;
    prompt += "\n";
    prompt += "Output: ";
    prompt += spec.example_output;
    prompt += "\n\n";
    prompt += kLogListPrefix;
    prompt += list;
    return prompt;
}

std::string extract_template(const std::string& response) {
    if (response.empty()) {
        throw UnparseableResponseError("empty response");
    }

    // Prefer the last backtick span with visible content; code fences and
    // decoration produce empty spans we skip over.
    std::string candidate;
    bool found_span = false;
    std::size_t open = std::string::npos;
    for (std::size_t i = 0; i < response.size(); ++i) {
        if (response[i] != '`') {
            continue;
        }
        if (open == std::string::npos) {
            open = i;
        } else {
            std::string span = response.substr(open + 1, i - open - 1);
            if (!trim(span).empty()) {
                candidate = std::move(span);
                found_span = true;
            }
            open = std::string::npos;
        }
    }

    if (!found_span) {
        std::size_t end = response.size();
        while (end > 0) {
            std::size_t start = response.rfind('\n', end - 1);
            std::size_t line_start = (start == std::string::npos) ? 0 : start + 1;
            std::string line = trim(std::string_view(response).substr(line_start, end - line_start));
            if (!line.empty()) {
                candidate = std::move(line);
                break;
            }
            if (line_start == 0) {
                break;
            }
            end = line_start - 1;
        }
    }

    std::string text = trim(candidate);
    bool stripped = true;
    while (stripped) {
        stripped = strip_prefix_ci(text, "log template:") || strip_prefix_ci(text, "template:") ||
                   strip_prefix_ci(text, "output:");
    }
    while (text.size() >= 2 &&
           ((text.front() == '"' && text.back() == '"') ||
            (text.front() == '\'' && text.back() == '\''))) {
        text = trim(std::string_view(text).substr(1, text.size() - 2));
    }
    text.erase(std::remove(text.begin(), text.end(), '`'), text.end());
    text = trim(text);

    if (text.empty()) {
        throw UnparseableResponseError("response contains no template text");
    }
    return text;
}

} // namespace librelog
