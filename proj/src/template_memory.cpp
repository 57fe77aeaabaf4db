#include "librelog/template_memory.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>

#include "librelog/csv.hpp"
#include "librelog/errors.hpp"
#include "librelog/preprocess.hpp"

namespace librelog {

namespace {

constexpr std::string_view kCaptureRegex = "(.+?)";
constexpr std::string_view kRegexMeta = R"(\^$.|?*+()[]{})";

std::string escape_regex(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (kRegexMeta.find(c) != std::string_view::npos) {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    return out;
}

void replace_all(std::string& text, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace

std::string to_regex(const std::string& placeholder_text) {
    std::string pattern = "^";
    std::size_t pos = 0;
    while (pos <= placeholder_text.size()) {
        std::size_t wild = placeholder_text.find(kWildcard, pos);
        if (wild == std::string::npos) {
            pattern += escape_regex(std::string_view(placeholder_text).substr(pos));
            break;
        }
        pattern += escape_regex(std::string_view(placeholder_text).substr(pos, wild - pos));
        pattern += kCaptureRegex;
        pos = wild + kWildcard.size();
    }
    pattern += "$";
    return pattern;
}

std::string normalize_template_text(std::string text) {
    text.erase(std::remove(text.begin(), text.end(), '`'), text.end());
    replace_all(text, "(.*?)", kWildcard);
    replace_all(text, "(.+?)", kWildcard);
    return trim(text);
}

TemplateMemory::TemplateMemory() : mutex_(std::make_unique<std::shared_mutex>()) {}

void TemplateMemory::insert_sorted(Template tpl) {
    auto pos = std::upper_bound(templates_.begin(), templates_.end(), tpl,
                                [](const Template& a, const Template& b) {
                                    return std::tie(a.token_count, a.template_id) <
                                           std::tie(b.token_count, b.template_id);
                                });
    auto offset = static_cast<std::size_t>(pos - templates_.begin());
    compiled_.insert(compiled_.begin() + static_cast<std::ptrdiff_t>(offset),
                     std::regex(tpl.regex_text, std::regex::ECMAScript | std::regex::optimize));
    templates_.insert(pos, std::move(tpl));
    // Positions at and after the insertion point shifted by one.
    for (std::size_t i = offset; i < templates_.size(); ++i) {
        pos_by_id_[templates_[i].template_id] = i;
    }
}

int TemplateMemory::insert(const std::string& placeholder_text) {
    std::string text = normalize_template_text(placeholder_text);
    if (text.empty()) {
        throw Error("cannot store an empty template");
    }
    std::unique_lock lock(*mutex_);
    if (auto it = id_by_text_.find(text); it != id_by_text_.end()) {
        return it->second;
    }
    Template tpl;
    tpl.template_id = next_id_++;
    tpl.placeholder_text = text;
    tpl.regex_text = to_regex(text);
    tpl.token_count = tokenize(text).size();
    id_by_text_.emplace(text, tpl.template_id);
    text_by_id_.push_back(text);
    int id = tpl.template_id;
    insert_sorted(std::move(tpl));
    return id;
}

std::optional<int> TemplateMemory::scan(const std::string& content, bool count) const {
    const std::size_t length = tokenize(content).size();
    // First template whose token count exceeds the log length; everything
    // below it is eligible.
    auto hi = std::upper_bound(templates_.begin(), templates_.end(), length,
                               [](std::size_t len, const Template& t) {
                                   return len < t.token_count;
                               });
    std::size_t block_end = static_cast<std::size_t>(hi - templates_.begin());
    while (block_end > 0) {
        const std::size_t count_here = templates_[block_end - 1].token_count;
        std::size_t block_start = block_end;
        while (block_start > 0 && templates_[block_start - 1].token_count == count_here) {
            --block_start;
        }
        for (std::size_t i = block_start; i < block_end; ++i) {
            if (std::regex_match(content, compiled_[i])) {
                if (count) {
                    // Concurrent matchers may hit the same template.
                    std::atomic_ref<std::uint64_t> counter(
                        const_cast<Template&>(templates_[i]).match_count);
                    counter.fetch_add(1, std::memory_order_relaxed);
                }
                return templates_[i].template_id;
            }
        }
        block_end = block_start;
    }
    return std::nullopt;
}

std::optional<int> TemplateMemory::match(const std::string& content) {
    std::shared_lock lock(*mutex_);
    return scan(content, true);
}

std::optional<int> TemplateMemory::peek_match(const std::string& content) const {
    std::shared_lock lock(*mutex_);
    return scan(content, false);
}

bool TemplateMemory::template_matches(int template_id, const std::string& content) const {
    std::shared_lock lock(*mutex_);
    auto it = pos_by_id_.find(template_id);
    if (it == pos_by_id_.end()) {
        return false;
    }
    return std::regex_match(content, compiled_[it->second]);
}

std::string TemplateMemory::placeholder_of(int template_id) const {
    std::shared_lock lock(*mutex_);
    if (template_id < 1 || static_cast<std::size_t>(template_id) > text_by_id_.size()) {
        throw Error("unknown template id " + std::to_string(template_id));
    }
    return text_by_id_[static_cast<std::size_t>(template_id) - 1];
}

std::size_t TemplateMemory::size() const {
    std::shared_lock lock(*mutex_);
    return templates_.size();
}

std::uint64_t TemplateMemory::total_match_count() const {
    std::shared_lock lock(*mutex_);
    std::uint64_t total = 0;
    for (const auto& tpl : templates_) {
        // counters may be bumped by concurrent matchers
        total += std::atomic_ref<const std::uint64_t>(tpl.match_count).load(
            std::memory_order_relaxed);
    }
    return total;
}

std::vector<Template> TemplateMemory::snapshot() const {
    std::shared_lock lock(*mutex_);
    std::vector<Template> copy;
    copy.reserve(templates_.size());
    for (const auto& tpl : templates_) {
        Template t;
        t.template_id = tpl.template_id;
        t.placeholder_text = tpl.placeholder_text;
        t.regex_text = tpl.regex_text;
        t.token_count = tpl.token_count;
        t.match_count = std::atomic_ref<const std::uint64_t>(tpl.match_count).load(
            std::memory_order_relaxed);
        copy.push_back(std::move(t));
    }
    return copy;
}

void TemplateMemory::save_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FileNotReadableError("cannot write memory CSV: " + path.string());
    }
    out << "TemplateId,TokenCount,PlaceholderText\n";
    std::shared_lock lock(*mutex_);
    for (const auto& tpl : templates_) {
        out << csv::make_row({std::to_string(tpl.template_id), std::to_string(tpl.token_count),
                              tpl.placeholder_text});
    }
}

TemplateMemory TemplateMemory::load_csv(const std::filesystem::path& path) {
    auto rows = csv::parse_file(path);
    if (rows.empty() || rows.front().size() < 3 || rows.front()[0] != "TemplateId") {
        throw Error("not a template memory CSV: " + path.string());
    }
    TemplateMemory memory;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < 3 || (row.size() == 1 && row[0].empty())) {
            continue;
        }
        int id = std::stoi(row[0]);
        std::string text = normalize_template_text(row[2]);
        if (text.empty()) {
            continue;
        }
        Template tpl;
        tpl.template_id = id;
        tpl.placeholder_text = text;
        tpl.regex_text = to_regex(text);
        tpl.token_count = tokenize(text).size();
        memory.id_by_text_.emplace(text, id);
        if (memory.text_by_id_.size() < static_cast<std::size_t>(id)) {
            memory.text_by_id_.resize(static_cast<std::size_t>(id));
        }
        memory.text_by_id_[static_cast<std::size_t>(id) - 1] = text;
        memory.next_id_ = std::max(memory.next_id_, id + 1);
        memory.insert_sorted(std::move(tpl));
    }
    return memory;
}

} // namespace librelog
