#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace librelog::csv {

/// Quotes a field when it contains a comma, quote, or newline (RFC 4180).
std::string escape(std::string_view field);

/// Renders one row, fields escaped and joined by commas, newline-terminated.
std::string make_row(const std::vector<std::string>& fields);

/// Parses CSV text into rows of fields. Handles quoted fields containing
/// commas, escaped quotes ("") and embedded newlines. Accepts LF and CRLF.
std::vector<std::vector<std::string>> parse_string(std::string_view text);

/// Reads and parses a whole CSV file. Throws FileNotReadableError.
std::vector<std::vector<std::string>> parse_file(const std::filesystem::path& path);

} // namespace librelog::csv
