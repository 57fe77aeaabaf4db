#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace librelog {

/// One input line with the message body separated from its header fields.
struct LogRecord {
    std::size_t line_no = 0;  // 1-based over non-empty lines, in file order
    std::string raw;          // original line, terminator stripped
    std::string content;      // message body after header removal
};

/// Header layout of a log file, e.g. parsed from "<Date> <Time> <Level> <Content>".
/// The first field_names.size()-1 whitespace-separated fields of a line are
/// consumed as headers; the remainder of the line is the content field.
struct LogFormat {
    std::vector<std::string> field_names;
    std::string content_field = "Content";

    /// Parses a format string of angle-bracketed field names. Text between
    /// fields (separators, punctuation) is ignored.
    static LogFormat from_string(const std::string& format);

    /// Throws Error unless content_field appears exactly once in field_names.
    void validate() const;
};

struct GroundTruthEntry {
    std::size_t line_no = 0;
    std::string content;
    std::string event_template;  // static text with <*> placeholders
};

struct LoadResult {
    std::vector<LogRecord> records;
    std::size_t extraction_failures = 0;  // lines that fell back to content = raw
};

/// Reads a log file, one record per non-empty line. Lines whose header
/// fields cannot be extracted keep the whole line as content and are counted
/// in extraction_failures. Throws FileNotReadableError, EmptyInputError.
LoadResult load_logs(const std::filesystem::path& path, const LogFormat& format);

/// Reads a ground-truth CSV with LineId, Content and EventTemplate columns,
/// returning entries sorted by LineId. Throws FileNotReadableError,
/// MissingColumnError, DuplicateLineIdError.
std::vector<GroundTruthEntry> load_ground_truth(const std::filesystem::path& path);

} // namespace librelog
