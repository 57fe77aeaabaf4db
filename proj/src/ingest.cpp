#include "librelog/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>

#include "librelog/csv.hpp"
#include "librelog/errors.hpp"

namespace librelog {

namespace {

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Skips n_headers whitespace-separated fields and returns the trimmed
// remainder, or nullopt when the line has no content left.
std::optional<std::string> strip_headers(const std::string& line, std::size_t n_headers) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    };
    skip_ws();
    for (std::size_t i = 0; i < n_headers; ++i) {
        if (pos >= line.size()) {
            return std::nullopt;
        }
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        skip_ws();
    }
    std::string content = trim(std::string_view(line).substr(pos));
    if (content.empty()) {
        return std::nullopt;
    }
    return content;
}

} // namespace

LogFormat LogFormat::from_string(const std::string& format) {
    LogFormat fmt;
    std::size_t pos = 0;
    while ((pos = format.find('<', pos)) != std::string::npos) {
        std::size_t close = format.find('>', pos + 1);
        if (close == std::string::npos) {
            break;
        }
        std::string name = trim(std::string_view(format).substr(pos + 1, close - pos - 1));
        if (!name.empty()) {
            fmt.field_names.push_back(name);
        }
        pos = close + 1;
    }
    return fmt;
}

void LogFormat::validate() const {
    auto n = std::count(field_names.begin(), field_names.end(), content_field);
    if (n != 1) {
        throw Error("log format must name the content field '" + content_field +
                    "' exactly once, found " + std::to_string(n) + " occurrences");
    }
}

LoadResult load_logs(const std::filesystem::path& path, const LogFormat& format) {
    format.validate();
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileNotReadableError("cannot open log file: " + path.string());
    }

    LoadResult result;
    const std::size_t n_headers = format.field_names.size() - 1;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (is_blank(line)) {
            continue;
        }
        LogRecord rec;
        rec.line_no = result.records.size() + 1;
        rec.raw = line;
        if (auto content = strip_headers(line, n_headers)) {
            rec.content = std::move(*content);
        } else {
            rec.content = rec.raw;
            ++result.extraction_failures;
        }
        result.records.push_back(std::move(rec));
    }
    if (result.records.empty()) {
        throw EmptyInputError("log file has no non-empty lines: " + path.string());
    }
    return result;
}

std::vector<GroundTruthEntry> load_ground_truth(const std::filesystem::path& path) {
    auto rows = csv::parse_file(path);
    if (rows.empty()) {
        throw MissingColumnError("ground truth has no header row: " + path.string());
    }

    const auto& header = rows.front();
    auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) {
                return i;
            }
        }
        throw MissingColumnError("ground truth is missing column '" + name + "'");
    };
    const std::size_t id_col = column("LineId");
    const std::size_t content_col = column("Content");
    const std::size_t template_col = column("EventTemplate");

    std::vector<GroundTruthEntry> entries;
    std::set<std::size_t> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        bool all_empty = std::all_of(row.begin(), row.end(),
                                     [](const std::string& f) { return f.empty(); });
        if (all_empty) {
            continue;
        }
        std::size_t needed = std::max({id_col, content_col, template_col});
        if (row.size() <= needed) {
            throw Error("ground truth row " + std::to_string(r + 1) + " has too few fields");
        }
        GroundTruthEntry entry;
        try {
            entry.line_no = std::stoull(trim(row[id_col]));
        } catch (const std::exception&) {
            throw Error("ground truth row " + std::to_string(r + 1) + " has a non-numeric LineId");
        }
        if (!seen.insert(entry.line_no).second) {
            throw DuplicateLineIdError("duplicate LineId " + std::to_string(entry.line_no));
        }
        entry.content = row[content_col];
        entry.event_template = row[template_col];
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end(),
              [](const GroundTruthEntry& a, const GroundTruthEntry& b) {
                  return a.line_no < b.line_no;
              });
    return entries;
}

} // namespace librelog
