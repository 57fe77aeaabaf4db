#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "librelog/ingest.hpp"
#include "librelog/parser_core.hpp"

namespace librelog {

struct EvalReport {
    double ga = 0.0;
    double pa = 0.0;
    std::size_t n_messages = 0;        // messages evaluated
    std::size_t n_pred_templates = 0;  // distinct predicted templates
    std::size_t n_truth_templates = 0; // distinct ground-truth templates
    std::size_t n_excluded = 0;        // lines without a ground-truth entry (or vice versa)
    StageTimings timings;
};

/// A message is correctly grouped when the set of lines sharing its
/// predicted template id equals the set of lines sharing its ground-truth
/// template. Returns correct / total. Throws KeyMismatchError when the two
/// maps do not cover the same lines.
double grouping_accuracy(const std::map<std::size_t, int>& pred,
                         const std::map<std::size_t, std::string>& truth);

/// A message is correctly parsed when its predicted template equals the
/// ground-truth template after canonicalization. Throws KeyMismatchError.
double parsing_accuracy(const std::map<std::size_t, std::string>& pred,
                        const std::map<std::size_t, std::string>& truth);

/// Normalizes placeholder spellings ((.*?), (.+?)) to <*>, collapses
/// whitespace runs to single spaces and trims. Adjacent placeholders are
/// deliberately kept separate.
std::string canonicalize_template(const std::string& text);

/// Joins parse output with ground truth by line number and computes both
/// metrics. Lines present on only one side are excluded and counted in
/// n_excluded. Throws KeyMismatchError when no lines overlap at all.
EvalReport evaluate(const std::vector<LogRecord>& records, const ParseOutput& output,
                    const std::vector<GroundTruthEntry>& truth);

} // namespace librelog
