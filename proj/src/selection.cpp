#include "librelog/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "librelog/errors.hpp"
#include "librelog/preprocess.hpp"

namespace librelog {

namespace {

// Seeded bounded draw. std::uniform_int_distribution is implementation
// defined, so roll our own to keep selections reproducible everywhere.
std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

// Partial Fisher-Yates: the first `take` slots end up holding the sample,
// in draw order.
std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t take,
                                                  std::mt19937_64& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < take; ++i) {
        std::size_t j = i + bounded(rng, n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(take);
    return idx;
}

} // namespace

SelectionStrategy selection_strategy_from_string(const std::string& name) {
    if (name == "jaccard") return SelectionStrategy::jaccard;
    if (name == "cosine") return SelectionStrategy::cosine;
    if (name == "random") return SelectionStrategy::random;
    throw Error("unknown selection strategy: " + name);
}

std::string to_string(SelectionStrategy strategy) {
    switch (strategy) {
        case SelectionStrategy::jaccard: return "jaccard";
        case SelectionStrategy::cosine: return "cosine";
        case SelectionStrategy::random: return "random";
    }
    return "jaccard";
}

void SelectionConfig::validate() const {
    if (k < 1 || k > 10) {
        throw Error("selection k must be in [1, 10], got " + std::to_string(k));
    }
    if (sample_cap < 1) {
        throw Error("sample_cap must be positive, got " + std::to_string(sample_cap));
    }
}

double jaccard_similarity(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() || b.empty()) {
        throw EmptyTokenSetError("jaccard similarity needs non-empty token sets");
    }
    std::size_t intersection = 0;
    for (const auto& token : a) {
        if (b.count(token)) {
            ++intersection;
        }
    }
    std::size_t union_size = a.size() + b.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(union_size);
}

double cosine_similarity(const std::map<std::string, int>& a,
                         const std::map<std::string, int>& b) {
    if (a.empty() || b.empty()) {
        throw EmptyTokenSetError("cosine similarity needs non-empty token counts");
    }
    double dot = 0.0;
    for (const auto& [token, count] : a) {
        auto it = b.find(token);
        if (it != b.end()) {
            dot += static_cast<double>(count) * static_cast<double>(it->second);
        }
    }
    auto norm = [](const std::map<std::string, int>& v) {
        double sum = 0.0;
        for (const auto& [token, count] : v) {
            sum += static_cast<double>(count) * static_cast<double>(count);
        }
        return std::sqrt(sum);
    };
    return dot / (norm(a) * norm(b));
}

std::set<std::string> token_set(std::string_view content) {
    auto tokens = tokenize(content);
    return std::set<std::string>(tokens.begin(), tokens.end());
}

std::map<std::string, int> token_counts(std::string_view content) {
    std::map<std::string, int> counts;
    for (auto& token : tokenize(content)) {
        ++counts[token];
    }
    return counts;
}

std::vector<std::string> select_representatives(
    const std::vector<std::pair<std::size_t, std::string>>& group_logs,
    const SelectionConfig& cfg) {
    if (group_logs.empty()) {
        throw EmptyGroupError("cannot select representatives from an empty group");
    }
    std::mt19937_64 rng(cfg.rng_seed);

    // Ascending record-index order makes every later tie-break stable.
    std::vector<std::pair<std::size_t, std::string>> sample = group_logs;
    std::sort(sample.begin(), sample.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Cap oversized groups with a uniform sample, kept in index order.
    if (sample.size() > static_cast<std::size_t>(cfg.sample_cap)) {
        auto picks = draw_without_replacement(sample.size(),
                                              static_cast<std::size_t>(cfg.sample_cap), rng);
        std::sort(picks.begin(), picks.end());
        std::vector<std::pair<std::size_t, std::string>> capped;
        capped.reserve(picks.size());
        for (std::size_t p : picks) {
            capped.push_back(std::move(sample[p]));
        }
        sample = std::move(capped);
    }

    const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(cfg.k), sample.size());

    if (cfg.strategy == SelectionStrategy::random) {
        auto picks = draw_without_replacement(sample.size(), want, rng);
        std::vector<std::string> out;
        out.reserve(want);
        for (std::size_t p : picks) {
            out.push_back(sample[p].second);
        }
        return out;
    }

    const bool use_jaccard = cfg.strategy == SelectionStrategy::jaccard;
    std::vector<std::set<std::string>> sets;
    std::vector<std::map<std::string, int>> counts;
    if (use_jaccard) {
        sets.reserve(sample.size());
        for (const auto& [idx, content] : sample) {
            sets.push_back(token_set(content));
        }
    } else {
        counts.reserve(sample.size());
        for (const auto& [idx, content] : sample) {
            counts.push_back(token_counts(content));
        }
    }
    auto similarity = [&](std::size_t i, std::size_t j) {
        return use_jaccard ? jaccard_similarity(sets[i], sets[j])
                           : cosine_similarity(counts[i], counts[j]);
    };

    // Seed with the longest log (by characters), then farthest-point style:
    // add the candidate whose highest similarity to the selected set is
    // lowest. Ties go to the smaller record index; sample order is already
    // ascending by index.
    std::vector<bool> selected(sample.size(), false);
    std::vector<std::size_t> order;
    std::size_t seed_pos = 0;
    for (std::size_t i = 1; i < sample.size(); ++i) {
        if (sample[i].second.size() > sample[seed_pos].second.size()) {
            seed_pos = i;
        }
    }
    selected[seed_pos] = true;
    order.push_back(seed_pos);

    while (order.size() < want) {
        std::size_t best_pos = sample.size();
        double best_score = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            if (selected[i]) {
                continue;
            }
            double score = 0.0;
            for (std::size_t s : order) {
                score = std::max(score, similarity(i, s));
            }
            if (best_pos == sample.size() || score < best_score) {
                best_pos = i;
                best_score = score;
            }
        }
        selected[best_pos] = true;
        order.push_back(best_pos);
    }

    std::vector<std::string> out;
    out.reserve(order.size());
    for (std::size_t p : order) {
        out.push_back(sample[p].second);
    }
    return out;
}

} // namespace librelog
