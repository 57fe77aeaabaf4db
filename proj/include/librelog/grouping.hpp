#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "librelog/preprocess.hpp"

namespace librelog {

/// A leaf cluster of logs sharing static structure. The signature is the
/// evolving common token pattern: any position whose token has ever
/// disagreed among members is <*>.
struct LogGroup {
    int group_id = 0;
    std::size_t token_length = 0;
    std::vector<std::string> signature;
    std::vector<std::size_t> member_indices;  // record indices, ascending
};

/// Fraction of positions where the signature token equals the log token or
/// is already <*>. Throws LengthMismatchError on unequal lengths.
double group_similarity(const std::vector<std::string>& signature,
                        const std::vector<std::string>& masked_tokens);

/// Fixed-depth index: token count -> up to k_prefix prefix-token edges ->
/// leaf groups. A <*> prefix token routes to a dedicated wildcard child so
/// masked head tokens do not fan out into one leaf per value; logs with a
/// literal head token also probe the wildcard child when present.
class GroupingTree {
public:
    explicit GroupingTree(int k_prefix = 3, double sim_threshold = 0.5);

    /// Routes the log to the best-matching leaf group (similarity strictly
    /// above the threshold, ties to the smallest group id) or creates a new
    /// group. Returns the group id. Single-writer: not safe to call
    /// concurrently.
    int insert(const TokenizedLog& tlog);

    /// All groups, ordered by group id. Safe to read concurrently once
    /// inserts are done.
    const std::vector<LogGroup>& groups() const { return groups_; }

    int k_prefix() const { return k_prefix_; }
    double sim_threshold() const { return sim_threshold_; }

private:
    struct TrieNode {
        std::map<std::string, std::unique_ptr<TrieNode>> children;
        std::unique_ptr<TrieNode> wildcard;
        std::vector<int> leaf_groups;  // ids of groups at this leaf
    };

    void collect_leaves(TrieNode* node, const std::vector<std::string>& masked,
                        std::size_t level, std::size_t depth,
                        std::vector<TrieNode*>& leaves);

    int k_prefix_;
    double sim_threshold_;
    std::map<std::size_t, TrieNode> length_buckets_;
    std::vector<LogGroup> groups_;
};

} // namespace librelog
