#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace librelog {

/// Task instruction shared by every query; never varies per system or group.
inline constexpr std::string_view kPromptInstruction =
    "I want you to act like an expert in log parsing. I will give you a list "
    "of logs that share one common template. You must identify and abstract "
    "all the dynamic variables in the logs with `<*>` and output ONE static "
    "log template that matches all the given logs. Print the template "
    "surrounded by backticks.";

/// One fixed input/output example demonstrating the expected response form.
inline constexpr std::string_view kPromptExampleInput =
    "[\"try to connect to host: 172.16.254.1:5000, finished.\", "
    "\"try to connect to host: 173.16.254.2:6060, finished.\"]";
inline constexpr std::string_view kPromptExampleOutput =
    "`try to connect to host: <*>, finished.`";

/// Marker introducing the logs to parse; the mock backend locates the log
/// list by this prefix.
inline constexpr std::string_view kLogListPrefix = "Log list: ";

struct PromptSpec {
    std::string instruction{kPromptInstruction};
    std::string example_input{kPromptExampleInput};
    std::string example_output{kPromptExampleOutput};
    std::vector<std::string> log_list;

    static PromptSpec for_logs(std::vector<std::string> logs);
};

/// Renders the full prompt: instruction, blank line, example block, blank
/// line, then `Log list: ["...", ...]` with JSON-style escaping. Byte
/// deterministic. Throws EmptyLogListError.
std::string build_prompt(const PromptSpec& spec);

/// Pulls the template out of a raw model response: last non-empty
/// backtick-delimited span if one exists, otherwise the last non-empty line;
/// then strips known prefixes ("log template:", "template:", "output:",
/// case-insensitive), surrounding quotes, stray backticks and whitespace.
/// Throws UnparseableResponseError when nothing remains.
std::string extract_template(const std::string& response);

} // namespace librelog
