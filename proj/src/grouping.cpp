#include "librelog/grouping.hpp"

#include <algorithm>

#include "librelog/errors.hpp"

namespace librelog {

double group_similarity(const std::vector<std::string>& signature,
                        const std::vector<std::string>& masked_tokens) {
    if (signature.size() != masked_tokens.size()) {
        throw LengthMismatchError("signature length " + std::to_string(signature.size()) +
                                  " != token length " + std::to_string(masked_tokens.size()));
    }
    std::size_t common = 0;
    for (std::size_t i = 0; i < signature.size(); ++i) {
        if (signature[i] == kWildcard || signature[i] == masked_tokens[i]) {
            ++common;
        }
    }
    return static_cast<double>(common) / static_cast<double>(signature.size());
}

GroupingTree::GroupingTree(int k_prefix, double sim_threshold)
    : k_prefix_(k_prefix), sim_threshold_(sim_threshold) {}

void GroupingTree::collect_leaves(TrieNode* node, const std::vector<std::string>& masked,
                                  std::size_t level, std::size_t depth,
                                  std::vector<TrieNode*>& leaves) {
    if (level == depth) {
        leaves.push_back(node);
        return;
    }
    const std::string& token = masked[level];
    if (token != kWildcard) {
        auto it = node->children.find(token);
        if (it != node->children.end()) {
            collect_leaves(it->second.get(), masked, level + 1, depth, leaves);
        }
    }
    if (node->wildcard) {
        collect_leaves(node->wildcard.get(), masked, level + 1, depth, leaves);
    }
}

int GroupingTree::insert(const TokenizedLog& tlog) {
    const auto& masked = tlog.masked_tokens;
    if (masked.empty()) {
        throw EmptyContentError("cannot insert a log with no tokens");
    }
    const std::size_t length = masked.size();
    const std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(k_prefix_), length);
    TrieNode& root = length_buckets_[length];

    std::vector<TrieNode*> leaves;
    collect_leaves(&root, masked, 0, depth, leaves);

    int best_id = -1;
    double best_sim = -1.0;
    for (TrieNode* leaf : leaves) {
        for (int gid : leaf->leaf_groups) {
            double sim = group_similarity(groups_[gid].signature, masked);
            if (sim > best_sim || (sim == best_sim && gid < best_id)) {
                best_sim = sim;
                best_id = gid;
            }
        }
    }

    if (best_id >= 0 && best_sim > sim_threshold_) {
        LogGroup& group = groups_[best_id];
        group.member_indices.push_back(tlog.record_index);
        for (std::size_t i = 0; i < length; ++i) {
            if (group.signature[i] != masked[i]) {
                group.signature[i] = kWildcard;
            }
        }
        return best_id;
    }

    // New group, stored along the log's own prefix path.
    const int gid = static_cast<int>(groups_.size());
    LogGroup group;
    group.group_id = gid;
    group.token_length = length;
    group.signature = masked;
    group.member_indices.push_back(tlog.record_index);
    groups_.push_back(std::move(group));

    TrieNode* node = &root;
    for (std::size_t level = 0; level < depth; ++level) {
        const std::string& token = masked[level];
        if (token == kWildcard) {
            if (!node->wildcard) {
                node->wildcard = std::make_unique<TrieNode>();
            }
            node = node->wildcard.get();
        } else {
            auto& child = node->children[token];
            if (!child) {
                child = std::make_unique<TrieNode>();
            }
            node = child.get();
        }
    }
    node->leaf_groups.push_back(gid);
    return gid;
}

} // namespace librelog
