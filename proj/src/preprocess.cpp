#include "librelog/preprocess.hpp"

#include <algorithm>
#include <cctype>

#include "librelog/errors.hpp"

namespace librelog {

std::vector<std::string> tokenize(std::string_view content) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < content.size()) {
        while (i < content.size() && std::isspace(static_cast<unsigned char>(content[i]))) ++i;
        std::size_t start = i;
        while (i < content.size() && !std::isspace(static_cast<unsigned char>(content[i]))) ++i;
        if (i > start) {
            tokens.emplace_back(content.substr(start, i - start));
        }
    }
    if (tokens.empty()) {
        throw EmptyContentError("cannot tokenize empty content");
    }
    return tokens;
}

std::vector<std::string> mask_numerics(const std::vector<std::string>& tokens) {
    std::vector<std::string> masked;
    masked.reserve(tokens.size());
    for (const auto& token : tokens) {
        bool has_digit = std::any_of(token.begin(), token.end(),
                                     [](unsigned char c) { return std::isdigit(c); });
        masked.emplace_back(has_digit ? std::string(kWildcard) : token);
    }
    return masked;
}

TokenizedLog preprocess_record(std::size_t record_index, std::string_view content) {
    TokenizedLog tlog;
    tlog.record_index = record_index;
    tlog.tokens = tokenize(content);
    tlog.masked_tokens = mask_numerics(tlog.tokens);
    return tlog;
}

} // namespace librelog
