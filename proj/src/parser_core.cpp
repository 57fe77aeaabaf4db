#include "librelog/parser_core.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <optional>
#include <regex>
#include <thread>

#include "librelog/errors.hpp"
#include "librelog/preprocess.hpp"
#include "librelog/prompting.hpp"

namespace librelog {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point start) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

struct RoundOutcome {
    bool ok = false;
    std::string template_text;
    double latency_ms = 0.0;
};

// One selection + query + extraction attempt over the current work set.
// Backend and extraction failures surface as a failed round.
RoundOutcome run_live_round(const std::vector<std::pair<std::size_t, std::string>>& work_logs,
                            const SelectionConfig& selection, LlmBackend& backend) {
    RoundOutcome outcome;
    auto start = clock_type::now();
    try {
        auto reps = select_representatives(work_logs, selection);
        auto prompt = build_prompt(PromptSpec::for_logs(std::move(reps)));
        auto result = backend.complete(prompt);
        outcome.template_text = extract_template(result.text);
        outcome.ok = true;
    } catch (const Error&) {
        outcome.ok = false;
    }
    outcome.latency_ms = elapsed_ms(start);
    return outcome;
}

std::vector<std::pair<std::size_t, std::string>> work_logs_of(
    const std::vector<std::size_t>& work, const std::vector<LogRecord>& records) {
    std::vector<std::pair<std::size_t, std::string>> logs;
    logs.reserve(work.size());
    for (std::size_t idx : work) {
        logs.emplace_back(idx, records[idx].content);
    }
    return logs;
}

// Query rounds plus terminal fallback for the members that missed the
// memory. The round provider abstracts over live queries and the replay of
// speculatively computed rounds.
void run_rounds_and_fallback(std::vector<std::size_t> work, const std::vector<LogRecord>& records,
                             TemplateMemory& memory, const ParserConfig& cfg, StageTimings& stats,
                             std::vector<int>& assignments, std::vector<bool>& fallback_flags,
                             const std::function<RoundOutcome(
                                 const std::vector<std::pair<std::size_t, std::string>>&)>& round) {
    const int max_rounds = 1 + (cfg.reflection_enabled ? cfg.max_reflections : 0);
    for (int round_no = 1; round_no <= max_rounds && !work.empty(); ++round_no) {
        if (round_no > 1) {
            ++stats.reflection_rounds;
        }
        RoundOutcome outcome = round(work_logs_of(work, records));
        ++stats.llm_calls;
        stats.llm_query_ms += outcome.latency_ms;
        if (!outcome.ok) {
            continue;
        }
        const int id = memory.insert(outcome.template_text);
        std::vector<std::size_t> still_unmatched;
        for (std::size_t idx : work) {
            if (memory.template_matches(id, records[idx].content)) {
                assignments[idx] = id;
            } else {
                still_unmatched.push_back(idx);
            }
        }
        work = std::move(still_unmatched);
    }

    if (work.empty()) {
        return;
    }
    // Terminal fallback: consensus of the residue. Members the consensus
    // regex cannot reproduce (irregular whitespace in the raw content) get a
    // singleton template of their own.
    std::vector<std::string> contents;
    contents.reserve(work.size());
    for (std::size_t idx : work) {
        contents.push_back(records[idx].content);
    }
    const int fallback_id = memory.insert(fallback_template(contents));
    for (std::size_t idx : work) {
        if (memory.template_matches(fallback_id, records[idx].content)) {
            assignments[idx] = fallback_id;
        } else {
            assignments[idx] = memory.insert(fallback_template({records[idx].content}));
        }
        fallback_flags[idx] = true;
    }
}

// --- Parallel mode -------------------------------------------------------
//
// Groups are parsed speculatively against the memory as it happened to look
// when a worker picked them up, then committed strictly in group id order.
// A commit first replays the memory probe against the live memory; when the
// probe outcome differs from what the speculation saw, the speculative
// rounds are discarded and the group is re-parsed on the spot. This keeps
// assignments identical to a single-threaded run while letting probe and
// query work proceed concurrently. Only committed rounds are counted in the
// stats, so reports stay deterministic.

struct GroupSpeculation {
    std::vector<std::optional<int>> probe;  // aligned with member_indices
    std::vector<RoundOutcome> rounds;
};

GroupSpeculation speculate_group(const LogGroup& group, const std::vector<LogRecord>& records,
                                 const TemplateMemory& memory, const ParserConfig& cfg,
                                 LlmBackend& backend) {
    GroupSpeculation spec;
    std::vector<std::size_t> work;
    spec.probe.reserve(group.member_indices.size());
    for (std::size_t idx : group.member_indices) {
        auto hit = memory.peek_match(records[idx].content);
        spec.probe.push_back(hit);
        if (!hit) {
            work.push_back(idx);
        }
    }
    const int max_rounds = 1 + (cfg.reflection_enabled ? cfg.max_reflections : 0);
    for (int round_no = 1; round_no <= max_rounds && !work.empty(); ++round_no) {
        RoundOutcome outcome = run_live_round(work_logs_of(work, records), cfg.selection, backend);
        spec.rounds.push_back(outcome);
        if (!outcome.ok) {
            continue;
        }
        // Same whole-string semantics the commit will apply via the memory.
        std::regex re(to_regex(normalize_template_text(outcome.template_text)));
        std::vector<std::size_t> still_unmatched;
        for (std::size_t idx : work) {
            if (!std::regex_match(records[idx].content, re)) {
                still_unmatched.push_back(idx);
            }
        }
        work = std::move(still_unmatched);
    }
    return spec;
}

} // namespace

std::string fallback_template(const std::vector<std::string>& contents) {
    if (contents.empty()) {
        throw UnequalTokenLengthError("fallback needs at least one content");
    }
    if (contents.size() == 1) {
        auto masked = mask_numerics(tokenize(contents.front()));
        std::string out;
        for (std::size_t i = 0; i < masked.size(); ++i) {
            if (i > 0) {
                out.push_back(' ');
            }
            out += masked[i];
        }
        return out;
    }
    return mock_consensus(contents);
}

void parse_group(const LogGroup& group, const std::vector<LogRecord>& records,
                 TemplateMemory& memory, const ParserConfig& cfg, LlmBackend& backend,
                 StageTimings& stats, std::vector<int>& assignments,
                 std::vector<bool>& fallback_flags) {
    std::vector<std::size_t> work;
    for (std::size_t idx : group.member_indices) {
        auto start = clock_type::now();
        auto hit = memory.match(records[idx].content);
        stats.memory_search_ms += elapsed_ms(start);
        if (hit) {
            assignments[idx] = *hit;
            ++stats.memory_hits;
        } else {
            work.push_back(idx);
        }
    }
    run_rounds_and_fallback(std::move(work), records, memory, cfg, stats, assignments,
                            fallback_flags,
                            [&](const std::vector<std::pair<std::size_t, std::string>>& logs) {
                                return run_live_round(logs, cfg.selection, backend);
                            });
}

ParseOutput parse_all(const std::vector<LogRecord>& records, const ParserConfig& cfg,
                      LlmBackend& backend, TemplateMemory memory) {
    if (records.empty()) {
        throw EmptyInputError("nothing to parse");
    }
    cfg.selection.validate();

    ParseOutput output;
    output.memory = std::move(memory);
    output.assignments.assign(records.size(), 0);
    output.fallback_flags.assign(records.size(), false);

    auto total_start = clock_type::now();

    GroupingTree tree(cfg.k_prefix, cfg.sim_threshold);
    {
        auto start = clock_type::now();
        for (std::size_t i = 0; i < records.size(); ++i) {
            tree.insert(preprocess_record(i, records[i].content));
        }
        output.stats.grouping_ms = elapsed_ms(start);
    }

    const auto& groups = tree.groups();
    if (cfg.threads <= 1 || groups.size() <= 1) {
        for (const auto& group : groups) {
            parse_group(group, records, output.memory, cfg, backend, output.stats,
                        output.assignments, output.fallback_flags);
        }
    } else {
        std::vector<std::optional<GroupSpeculation>> specs(groups.size());
        std::mutex mu;
        std::condition_variable cv;
        std::atomic<std::size_t> next{0};

        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= groups.size()) {
                    break;
                }
                auto spec = speculate_group(groups[i], records, output.memory, cfg, backend);
                {
                    std::lock_guard<std::mutex> lock(mu);
                    specs[i] = std::move(spec);
                }
                cv.notify_all();
            }
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(cfg.threads, static_cast<int>(groups.size()));
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }

        for (std::size_t i = 0; i < groups.size(); ++i) {
            {
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] { return specs[i].has_value(); });
            }
            const auto& group = groups[i];
            const auto& spec = *specs[i];

            // Counting probe against the live memory; this is the probe that
            // feeds match counts and hit statistics.
            std::vector<std::optional<int>> fresh;
            std::vector<std::size_t> work;
            fresh.reserve(group.member_indices.size());
            for (std::size_t idx : group.member_indices) {
                auto start = clock_type::now();
                auto hit = output.memory.match(records[idx].content);
                output.stats.memory_search_ms += elapsed_ms(start);
                fresh.push_back(hit);
                if (hit) {
                    output.assignments[idx] = *hit;
                    ++output.stats.memory_hits;
                } else {
                    work.push_back(idx);
                }
            }

            if (fresh == spec.probe) {
                // Replay the speculative rounds without touching the backend.
                std::size_t round_idx = 0;
                run_rounds_and_fallback(
                    std::move(work), records, output.memory, cfg, output.stats,
                    output.assignments, output.fallback_flags,
                    [&](const std::vector<std::pair<std::size_t, std::string>>&) {
                        return spec.rounds.at(round_idx++);
                    });
            } else {
                // Memory moved underneath the speculation; redo the rounds live.
                run_rounds_and_fallback(
                    std::move(work), records, output.memory, cfg, output.stats,
                    output.assignments, output.fallback_flags,
                    [&](const std::vector<std::pair<std::size_t, std::string>>& logs) {
                        return run_live_round(logs, cfg.selection, backend);
                    });
            }
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    output.stats.total_ms = elapsed_ms(total_start);
    return output;
}

ParseOutput parse_all(const std::vector<LogRecord>& records, const ParserConfig& cfg) {
    auto backend = make_backend(cfg.backend);
    return parse_all(records, cfg, *backend);
}

} // namespace librelog
