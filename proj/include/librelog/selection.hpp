#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace librelog {

enum class SelectionStrategy { jaccard, cosine, random };

SelectionStrategy selection_strategy_from_string(const std::string& name);
std::string to_string(SelectionStrategy strategy);

struct SelectionConfig {
    int k = 3;                 // representatives per prompt
    int sample_cap = 200;      // per-group sampling cap before selection
    SelectionStrategy strategy = SelectionStrategy::jaccard;
    std::uint64_t rng_seed = 0;

    /// Throws Error when k is outside [1, 10] or sample_cap < 1.
    void validate() const;
};

/// |a intersect b| / |a union b|. Throws EmptyTokenSetError on empty input.
double jaccard_similarity(const std::set<std::string>& a, const std::set<std::string>& b);

/// Cosine of the token-count vectors over the union vocabulary.
/// Throws EmptyTokenSetError on empty input.
double cosine_similarity(const std::map<std::string, int>& a,
                         const std::map<std::string, int>& b);

std::set<std::string> token_set(std::string_view content);
std::map<std::string, int> token_counts(std::string_view content);

/// Picks up to cfg.k diverse logs from the group. Groups larger than
/// cfg.sample_cap are first sampled down uniformly. The jaccard/cosine
/// strategies seed with the longest log and then repeatedly add the
/// candidate whose maximum similarity to the already-selected set is lowest;
/// the random strategy draws uniformly without replacement. All ties break
/// toward the smaller record index. Deterministic for a fixed rng_seed.
/// Throws EmptyGroupError.
std::vector<std::string> select_representatives(
    const std::vector<std::pair<std::size_t, std::string>>& group_logs,
    const SelectionConfig& cfg);

} // namespace librelog
