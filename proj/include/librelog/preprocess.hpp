#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace librelog {

/// Placeholder standing in for a dynamic variable.
inline constexpr std::string_view kWildcard = "<*>";

/// A log message split into tokens, plus the digit-masked variant used for
/// grouping.
struct TokenizedLog {
    std::size_t record_index = 0;
    std::vector<std::string> tokens;
    std::vector<std::string> masked_tokens;  // numeric tokens replaced by <*>
};

/// Splits content into maximal non-whitespace runs. Throws EmptyContentError
/// when content is empty after trimming.
std::vector<std::string> tokenize(std::string_view content);

/// Replaces every token containing at least one decimal digit with <*>.
std::vector<std::string> mask_numerics(const std::vector<std::string>& tokens);

/// Tokenizes and masks one record's content.
TokenizedLog preprocess_record(std::size_t record_index, std::string_view content);

} // namespace librelog
