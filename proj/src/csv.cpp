#include "librelog/csv.hpp"

#include <fstream>
#include <sstream>

#include "librelog/errors.hpp"

namespace librelog::csv {

std::string escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string make_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            row.push_back(',');
        }
        row += escape(fields[i]);
    }
    row.push_back('\n');
    return row;
}

std::vector<std::vector<std::string>> parse_string(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty() && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
            field_started = false;
        } else if (c == '\n') {
            end_row();
        } else if (c == '\r') {
            // swallowed; CRLF handled by the '\n' branch
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    // Final row without trailing newline.
    if (field_started || !field.empty() || !row.empty()) {
        end_row();
    }
    return rows;
}

std::vector<std::vector<std::string>> parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileNotReadableError("cannot open CSV file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

} // namespace librelog::csv
