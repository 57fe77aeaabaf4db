#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "librelog/evaluation.hpp"
#include "librelog/ingest.hpp"
#include "librelog/parser_core.hpp"

namespace librelog {

/// structured.csv: LineId,Content,EventId,EventTemplate — one row per record.
void write_structured_csv(const std::filesystem::path& path,
                          const std::vector<LogRecord>& records, const ParseOutput& output);

/// templates.csv: EventId,EventTemplate,Occurrences — templates that were
/// actually assigned, ascending by id.
void write_templates_csv(const std::filesystem::path& path,
                         const std::vector<LogRecord>& records, const ParseOutput& output);

/// report.csv: Dataset,GA,PA,Messages,PredTemplates,TruthTemplates,TotalMs,
/// LLMMs,GroupingMs,MemoryMs — single data row.
void write_report_csv(const std::filesystem::path& path, const std::string& dataset,
                      const EvalReport& report);

std::string report_text(const std::string& dataset, const EvalReport& report);

/// bench.csv: stage timing breakdown plus call counters — single data row.
void write_bench_csv(const std::filesystem::path& path, const StageTimings& stats);

std::string bench_text(const StageTimings& stats);

std::string format_ratio(double value);  // 4 decimal places
std::string format_ms(double value);     // 3 decimal places

} // namespace librelog
