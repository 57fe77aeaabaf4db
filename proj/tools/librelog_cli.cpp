// Command-line front end: parse logs into templates, evaluate against
// ground truth, or benchmark the pipeline stages.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "librelog/errors.hpp"
#include "librelog/evaluation.hpp"
#include "librelog/ingest.hpp"
#include "librelog/llm_backend.hpp"
#include "librelog/parser_core.hpp"
#include "librelog/report_io.hpp"

namespace fs = std::filesystem;
using namespace librelog;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBackendUnreachable = 3;
constexpr int kExitKeyMismatch = 4;

struct RunConfig {
    std::string input_path;
    std::string format = "<Content>";
    std::string ground_truth_path;
    std::string backend = "mock";
    std::string base_url = "http://127.0.0.1:8000";
    std::string model;
    std::string selection = "jaccard";
    std::uint64_t seed = 0;
    int k = 3;
    int sample_cap = 200;
    bool no_reflection = false;
    int max_reflections = 3;
    int k_prefix = 3;
    double sim_threshold = 0.5;
    std::string memory_in;
    std::string memory_out;
    std::string out_dir = "librelog_out";
    int threads = 1;
};

void add_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--input", cfg.input_path, "Log file, one log per line");
    app.add_option("--format", cfg.format,
                   "Header layout, e.g. \"<Date> <Time> <Level> <Content>\"");
    app.add_option("--ground-truth", cfg.ground_truth_path,
                   "CSV with LineId,Content,EventTemplate columns");
    app.add_option("--backend", cfg.backend, "Backend kind: mock or http")
        ->check(CLI::IsMember({"mock", "http"}));
    app.add_option("--base-url", cfg.base_url, "HTTP backend base URL");
    app.add_option("--model", cfg.model, "Model name sent to the HTTP backend");
    app.add_option("--k", cfg.k, "Representative logs per prompt (1-10)");
    app.add_option("--sample-cap", cfg.sample_cap, "Per-group sampling cap");
    app.add_option("--selection", cfg.selection, "Selection strategy")
        ->check(CLI::IsMember({"jaccard", "cosine", "random"}));
    app.add_option("--seed", cfg.seed, "Selection RNG seed");
    app.add_flag("--no-reflection", cfg.no_reflection, "Disable self-reflection rounds");
    app.add_option("--max-reflections", cfg.max_reflections, "Reflection round limit");
    app.add_option("--k-prefix", cfg.k_prefix, "Grouping tree prefix depth");
    app.add_option("--sim-threshold", cfg.sim_threshold, "Grouping similarity threshold");
    app.add_option("--memory-in", cfg.memory_in, "Template memory CSV to preload");
    app.add_option("--memory-out", cfg.memory_out, "Write final template memory CSV here");
    app.add_option("--out-dir", cfg.out_dir, "Output directory");
    app.add_option("--threads", cfg.threads, "Worker threads for group parsing");
}

ParserConfig to_parser_config(const RunConfig& cfg) {
    ParserConfig parser;
    parser.selection.k = cfg.k;
    parser.selection.sample_cap = cfg.sample_cap;
    parser.selection.strategy = selection_strategy_from_string(cfg.selection);
    parser.selection.rng_seed = cfg.seed;
    parser.backend.kind = backend_kind_from_string(cfg.backend);
    parser.backend.base_url = cfg.base_url;
    parser.backend.model_name = cfg.model;
    parser.k_prefix = cfg.k_prefix;
    parser.sim_threshold = cfg.sim_threshold;
    parser.reflection_enabled = !cfg.no_reflection;
    parser.max_reflections = cfg.max_reflections;
    parser.threads = cfg.threads;
    return parser;
}

struct PipelineResult {
    std::vector<LogRecord> records;
    ParseOutput output;
    std::string dataset;
};

// Shared front half of every command: validate config, load input, probe the
// backend, run the parse, write the core outputs.
PipelineResult run_pipeline(const RunConfig& cfg) {
    if (cfg.input_path.empty()) {
        throw Error("--input is required");
    }
    ParserConfig parser = to_parser_config(cfg);
    parser.selection.validate();
    if (parser.max_reflections < 0 || parser.threads < 1 || parser.k_prefix < 1) {
        throw Error("invalid parser configuration");
    }

    LogFormat format = LogFormat::from_string(cfg.format);
    format.validate();

    auto loaded = load_logs(cfg.input_path, format);
    if (loaded.extraction_failures > 0) {
        std::cerr << "warning: " << loaded.extraction_failures
                  << " line(s) fell back to raw content\n";
    }

    auto backend = make_backend(parser.backend);
    if (parser.backend.kind == BackendKind::http) {
        auto* http = dynamic_cast<HttpBackend*>(backend.get());
        if (http != nullptr && !http->reachable()) {
            throw TransportError("backend unreachable: " + parser.backend.base_url);
        }
    }

    TemplateMemory memory;
    if (!cfg.memory_in.empty()) {
        memory = TemplateMemory::load_csv(cfg.memory_in);
    }

    PipelineResult result;
    result.records = std::move(loaded.records);
    result.output = parse_all(result.records, parser, *backend, std::move(memory));
    result.dataset = fs::path(cfg.input_path).stem().string();

    fs::create_directories(cfg.out_dir);
    write_structured_csv(fs::path(cfg.out_dir) / "structured.csv", result.records, result.output);
    write_templates_csv(fs::path(cfg.out_dir) / "templates.csv", result.records, result.output);
    if (!cfg.memory_out.empty()) {
        result.output.memory.save_csv(cfg.memory_out);
    }
    return result;
}

int cmd_parse(const RunConfig& cfg) {
    auto result = run_pipeline(cfg);
    std::cout << "parsed " << result.records.size() << " logs into "
              << result.output.memory.size() << " stored templates\n";
    return kExitOk;
}

int cmd_eval(const RunConfig& cfg) {
    if (cfg.ground_truth_path.empty()) {
        throw Error("--ground-truth is required for eval");
    }
    auto result = run_pipeline(cfg);
    auto truth = load_ground_truth(cfg.ground_truth_path);
    auto report = evaluate(result.records, result.output, truth);

    write_report_csv(fs::path(cfg.out_dir) / "report.csv", result.dataset, report);
    std::ofstream txt(fs::path(cfg.out_dir) / "report.txt");
    txt << report_text(result.dataset, report);

    std::cout << "GA=" << format_ratio(report.ga) << " PA=" << format_ratio(report.pa) << "\n";
    return kExitOk;
}

int cmd_bench(const RunConfig& cfg) {
    auto result = run_pipeline(cfg);
    write_bench_csv(fs::path(cfg.out_dir) / "bench.csv", result.output.stats);
    std::cout << bench_text(result.output.stats);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unsupervised log parser with an LLM backend and template memory"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config")->description("key=value file mirroring the flag names");

    RunConfig cfg;
    add_options(app, cfg);

    auto* parse_cmd = app.add_subcommand("parse", "Parse logs and write structured output");
    auto* eval_cmd = app.add_subcommand("eval", "Parse and score against ground truth");
    auto* bench_cmd = app.add_subcommand("bench", "Parse and report stage timings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (parse_cmd->parsed()) {
            return cmd_parse(cfg);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(cfg);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(cfg);
        }
        return kExitConfigError;
    } catch (const KeyMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitKeyMismatch;
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBackendUnreachable;
    } catch (const FileNotReadableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const EmptyInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const MissingColumnError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const DuplicateLineIdError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}
