#include "librelog/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "librelog/csv.hpp"
#include "librelog/errors.hpp"

namespace librelog {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FileNotReadableError("cannot write file: " + path.string());
    }
    return out;
}

std::string format_fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

} // namespace

std::string format_ratio(double value) { return format_fixed(value, 4); }
std::string format_ms(double value) { return format_fixed(value, 3); }

void write_structured_csv(const std::filesystem::path& path,
                          const std::vector<LogRecord>& records, const ParseOutput& output) {
    auto out = open_out(path);
    out << "LineId,Content,EventId,EventTemplate\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const int id = output.assignments[i];
        out << csv::make_row({std::to_string(records[i].line_no), records[i].content,
                              std::to_string(id), output.memory.placeholder_of(id)});
    }
}

void write_templates_csv(const std::filesystem::path& path,
                         const std::vector<LogRecord>& records, const ParseOutput& output) {
    std::map<int, std::size_t> occurrences;
    for (std::size_t i = 0; i < records.size(); ++i) {
        ++occurrences[output.assignments[i]];
    }
    auto out = open_out(path);
    out << "EventId,EventTemplate,Occurrences\n";
    for (const auto& [id, count] : occurrences) {
        out << csv::make_row({std::to_string(id), output.memory.placeholder_of(id),
                              std::to_string(count)});
    }
}

void write_report_csv(const std::filesystem::path& path, const std::string& dataset,
                      const EvalReport& report) {
    auto out = open_out(path);
    out << "Dataset,GA,PA,Messages,PredTemplates,TruthTemplates,TotalMs,LLMMs,GroupingMs,"
           "MemoryMs\n";
    out << csv::make_row({dataset, format_ratio(report.ga), format_ratio(report.pa),
                          std::to_string(report.n_messages),
                          std::to_string(report.n_pred_templates),
                          std::to_string(report.n_truth_templates),
                          format_ms(report.timings.total_ms), format_ms(report.timings.llm_query_ms),
                          format_ms(report.timings.grouping_ms),
                          format_ms(report.timings.memory_search_ms)});
}

std::string report_text(const std::string& dataset, const EvalReport& report) {
    std::ostringstream out;
    out << "Dataset:          " << dataset << "\n"
        << "Messages:         " << report.n_messages << "\n"
        << "Excluded lines:   " << report.n_excluded << "\n"
        << "GA:               " << format_ratio(report.ga) << "\n"
        << "PA:               " << format_ratio(report.pa) << "\n"
        << "Pred templates:   " << report.n_pred_templates << "\n"
        << "Truth templates:  " << report.n_truth_templates << "\n"
        << bench_text(report.timings);
    return out.str();
}

void write_bench_csv(const std::filesystem::path& path, const StageTimings& stats) {
    auto out = open_out(path);
    out << "TotalMs,LLMMs,GroupingMs,MemoryMs,LLMCalls,MemoryHits,ReflectionRounds\n";
    out << csv::make_row({format_ms(stats.total_ms), format_ms(stats.llm_query_ms),
                          format_ms(stats.grouping_ms), format_ms(stats.memory_search_ms),
                          std::to_string(stats.llm_calls), std::to_string(stats.memory_hits),
                          std::to_string(stats.reflection_rounds)});
}

std::string bench_text(const StageTimings& stats) {
    std::ostringstream out;
    out << "Total time:       " << format_ms(stats.total_ms) << " ms\n"
        << "LLM query time:   " << format_ms(stats.llm_query_ms) << " ms\n"
        << "Grouping time:    " << format_ms(stats.grouping_ms) << " ms\n"
        << "Memory search:    " << format_ms(stats.memory_search_ms) << " ms\n"
        << "LLM calls:        " << stats.llm_calls << "\n"
        << "Memory hits:      " << stats.memory_hits << "\n"
        << "Reflection rounds: " << stats.reflection_rounds << "\n";
    return out.str();
}

} // namespace librelog
