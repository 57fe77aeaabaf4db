#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace librelog {

/// Converts a placeholder template to an anchored regex: static segments are
/// metacharacter-escaped and every <*> becomes a non-empty lazy capture
/// (.+?). Empty captures would let a template match logs with fewer tokens
/// than itself, which would break token-count pruning.
std::string to_regex(const std::string& placeholder_text);

/// Normalizes raw template text before storage: strips backticks, rewrites
/// regex-spelled placeholders ((.*?) / (.+?)) to <*>, trims whitespace.
std::string normalize_template_text(std::string text);

struct Template {
    int template_id = 0;
    std::string placeholder_text;
    std::string regex_text;  // to_regex(placeholder_text), recomputable
    std::size_t token_count = 0;
    std::uint64_t match_count = 0;  // memory-probe hits
};

/// Store of parsed templates kept sorted by (token_count, template_id).
/// Matching binary-searches the eligible range (token_count <= log length)
/// and scans it from the largest token count downward, ascending id within
/// equal counts; the first template whose regex matches the whole content
/// wins. Many matchers may run concurrently; inserts take the writer lock.
class TemplateMemory {
public:
    TemplateMemory();
    TemplateMemory(TemplateMemory&&) noexcept = default;
    TemplateMemory& operator=(TemplateMemory&&) noexcept = default;

    /// Inserts a normalized template, deduplicating identical placeholder
    /// texts. Returns the (new or existing) template id; ids start at 1.
    int insert(const std::string& placeholder_text);

    /// Probe that records the hit: bumps the winning template's match_count.
    std::optional<int> match(const std::string& content);

    /// Side-effect-free probe with identical semantics.
    std::optional<int> peek_match(const std::string& content) const;

    /// Whole-string match of one stored template against content.
    bool template_matches(int template_id, const std::string& content) const;

    std::string placeholder_of(int template_id) const;
    std::size_t size() const;
    std::uint64_t total_match_count() const;

    /// Snapshot in (token_count, template_id) order.
    std::vector<Template> snapshot() const;

    /// CSV persistence: header TemplateId,TokenCount,PlaceholderText.
    /// Loading rebuilds regexes via to_regex; match counts reset.
    void save_csv(const std::filesystem::path& path) const;
    static TemplateMemory load_csv(const std::filesystem::path& path);

private:
    std::optional<int> scan(const std::string& content, bool count) const;
    void insert_sorted(Template tpl);

    std::vector<Template> templates_;     // sorted by (token_count, template_id)
    std::vector<std::regex> compiled_;    // parallel to templates_
    std::unordered_map<std::string, int> id_by_text_;
    std::unordered_map<int, std::size_t> pos_by_id_;  // id -> index in templates_
    std::vector<std::string> text_by_id_;  // id - 1 -> placeholder_text
    int next_id_ = 1;
    mutable std::unique_ptr<std::shared_mutex> mutex_;
};

} // namespace librelog
