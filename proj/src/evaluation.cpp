#include "librelog/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "librelog/errors.hpp"

namespace librelog {

namespace {

void require_same_keys(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
    if (a != b) {
        throw KeyMismatchError("prediction and ground truth cover different lines");
    }
}

template <typename Map>
std::set<std::size_t> keys_of(const Map& m) {
    std::set<std::size_t> keys;
    for (const auto& [k, v] : m) {
        keys.insert(k);
    }
    return keys;
}

} // namespace

double grouping_accuracy(const std::map<std::size_t, int>& pred,
                         const std::map<std::size_t, std::string>& truth) {
    require_same_keys(keys_of(pred), keys_of(truth));
    if (pred.empty()) {
        throw KeyMismatchError("no lines to evaluate");
    }

    std::map<int, std::set<std::size_t>> pred_groups;
    std::map<std::string, std::set<std::size_t>> truth_groups;
    for (const auto& [line, id] : pred) {
        pred_groups[id].insert(line);
    }
    for (const auto& [line, tpl] : truth) {
        truth_groups[tpl].insert(line);
    }

    std::size_t correct = 0;
    for (const auto& [id, lines] : pred_groups) {
        // All lines of a predicted group share the same truth set iff the
        // group equals that truth set; check against any member's truth set.
        const auto& truth_set = truth_groups.at(truth.at(*lines.begin()));
        if (lines == truth_set) {
            correct += lines.size();
        }
    }
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

std::string canonicalize_template(const std::string& text) {
    std::string normalized = text;
    for (std::string_view spelling : {std::string_view("(.*?)"), std::string_view("(.+?)")}) {
        std::size_t pos = 0;
        while ((pos = normalized.find(spelling, pos)) != std::string::npos) {
            normalized.replace(pos, spelling.size(), "<*>");
            pos += 3;
        }
    }
    std::string out;
    out.reserve(normalized.size());
    bool in_ws = true;  // also trims leading whitespace
    for (char c : normalized) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_ws = true;
        } else {
            if (in_ws && !out.empty()) {
                out.push_back(' ');
            }
            out.push_back(c);
            in_ws = false;
        }
    }
    return out;
}

double parsing_accuracy(const std::map<std::size_t, std::string>& pred,
                        const std::map<std::size_t, std::string>& truth) {
    require_same_keys(keys_of(pred), keys_of(truth));
    if (pred.empty()) {
        throw KeyMismatchError("no lines to evaluate");
    }
    std::size_t correct = 0;
    for (const auto& [line, tpl] : pred) {
        if (canonicalize_template(tpl) == canonicalize_template(truth.at(line))) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

EvalReport evaluate(const std::vector<LogRecord>& records, const ParseOutput& output,
                    const std::vector<GroundTruthEntry>& truth) {
    std::map<std::size_t, std::string> truth_by_line;
    for (const auto& entry : truth) {
        truth_by_line.emplace(entry.line_no, entry.event_template);
    }

    EvalReport report;
    report.timings = output.stats;

    std::map<std::size_t, int> pred_ids;
    std::map<std::size_t, std::string> pred_templates;
    std::map<std::size_t, std::string> truth_templates;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto it = truth_by_line.find(records[i].line_no);
        if (it == truth_by_line.end()) {
            ++report.n_excluded;
            continue;
        }
        pred_ids[records[i].line_no] = output.assignments[i];
        pred_templates[records[i].line_no] = output.memory.placeholder_of(output.assignments[i]);
        truth_templates[records[i].line_no] = it->second;
    }
    report.n_excluded += truth_by_line.size() - truth_templates.size();
    if (pred_ids.empty()) {
        throw KeyMismatchError("no lines shared between prediction and ground truth");
    }

    report.n_messages = pred_ids.size();
    report.ga = grouping_accuracy(pred_ids, truth_templates);
    report.pa = parsing_accuracy(pred_templates, truth_templates);

    std::set<int> distinct_pred;
    for (const auto& [line, id] : pred_ids) {
        distinct_pred.insert(id);
    }
    std::set<std::string> distinct_truth;
    for (const auto& [line, tpl] : truth_templates) {
        distinct_truth.insert(canonicalize_template(tpl));
    }
    report.n_pred_templates = distinct_pred.size();
    report.n_truth_templates = distinct_truth.size();
    return report;
}

} // namespace librelog
