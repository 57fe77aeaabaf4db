#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "librelog/grouping.hpp"
#include "librelog/ingest.hpp"
#include "librelog/llm_backend.hpp"
#include "librelog/selection.hpp"
#include "librelog/template_memory.hpp"

namespace librelog {

struct ParserConfig {
    SelectionConfig selection{};
    BackendConfig backend{};
    int k_prefix = 3;
    double sim_threshold = 0.5;
    bool reflection_enabled = true;
    int max_reflections = 3;  // reflection rounds after the initial attempt
    int threads = 1;          // >1 enables group-level parallelism
};

/// Stage times are summed per-operation durations; total_ms is wall clock.
/// Single-threaded, the stage sum never exceeds the total. With threads > 1
/// queries overlap, so their summed latency can exceed the wall total.
struct StageTimings {
    double total_ms = 0.0;
    double llm_query_ms = 0.0;
    double grouping_ms = 0.0;
    double memory_search_ms = 0.0;
    std::uint64_t llm_calls = 0;
    std::uint64_t memory_hits = 0;
    std::uint64_t reflection_rounds = 0;
};

struct ParseOutput {
    std::vector<int> assignments;      // record index -> template id
    std::vector<bool> fallback_flags;  // true when assigned by the terminal fallback
    TemplateMemory memory;
    StageTimings stats;
};

/// Column consensus over equal-token-length contents; for a single content,
/// its digit-bearing tokens are masked so the lone log still yields a
/// template rather than a literal. Matches every multi-log input by
/// construction. Throws UnequalTokenLengthError.
std::string fallback_template(const std::vector<std::string>& contents);

/// Parses one group: members matching the memory are assigned immediately;
/// the rest go through up to 1 + max_reflections rounds of representative
/// selection, one backend query and template verification, re-selecting from
/// the still-unmatched subset each round; whatever remains receives the
/// consensus fallback. Every member ends up assigned. Backend failures
/// consume a round and are swallowed; the residue falls through to the
/// fallback.
void parse_group(const LogGroup& group, const std::vector<LogRecord>& records,
                 TemplateMemory& memory, const ParserConfig& cfg, LlmBackend& backend,
                 StageTimings& stats, std::vector<int>& assignments,
                 std::vector<bool>& fallback_flags);

/// Full pipeline: tokenize + mask + grouping tree (timed as grouping), then
/// parse_group per group in group id order. Deterministic for a fixed
/// selection seed and a deterministic backend, including --threads > 1,
/// where groups are parsed speculatively in parallel and committed in group
/// id order (stale speculations are transparently re-run). Throws
/// EmptyInputError.
ParseOutput parse_all(const std::vector<LogRecord>& records, const ParserConfig& cfg,
                      LlmBackend& backend, TemplateMemory memory = TemplateMemory());

/// Convenience overload constructing the backend from cfg.backend.
ParseOutput parse_all(const std::vector<LogRecord>& records, const ParserConfig& cfg);

} // namespace librelog
