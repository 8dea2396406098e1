#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "sri/harness.hpp"
#include "sri/patching.hpp"
#include "sri/perturbation.hpp"
#include "sri/prompting.hpp"
#include "sri/serialization.hpp"
#include "sri/synthesis.hpp"

// Command-line front end. Machine output is line-delimited JSON on stdout;
// human-readable tables go to stderr or behind --pretty. Exit codes: 0 clean,
// 1 when some items failed, 2 for configuration and usage errors.

namespace fs = std::filesystem;
using namespace sri;

namespace {

std::string read_stream(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return read_stream(in);
}

template <typename T>
std::vector<T> read_records(const std::string& path) {
    if (path == "-") return read_jsonl<T>(std::cin);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input: " + path);
    return read_jsonl<T>(in);
}

// stdout unless a real path is given.
struct OutputTarget {
    std::ofstream file;
    std::ostream* out = &std::cout;

    explicit OutputTarget(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot open output: " + path);
        out = &file;
    }
    std::ostream& stream() { return *out; }
};

RatioSpec parse_ratio(const std::string& text) {
    const auto fail = [&] {
        throw std::invalid_argument("ratio must be four integers a:b:c:d, got: " + text);
    };
    std::vector<std::string> pieces;
    std::size_t pos = 0;
    while (true) {
        const auto colon = text.find(':', pos);
        pieces.push_back(text.substr(pos, colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (pieces.size() != 4) fail();

    std::array<int, 4> parts{};
    for (std::size_t i = 0; i < 4; ++i) {
        try {
            std::size_t used = 0;
            parts[i] = std::stoi(pieces[i], &used);
            if (used != pieces[i].size()) fail();
        } catch (const std::invalid_argument&) {
            fail();
        } catch (const std::out_of_range&) {
            fail();
        }
    }
    return RatioSpec{parts[0], parts[1], parts[2], parts[3]};
}

std::vector<PerturbOperator> parse_operators(const std::string& csv) {
    if (csv.empty())
        return {kAllPerturbOperators.begin(), kAllPerturbOperators.end()};
    std::vector<PerturbOperator> ops;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = csv.find(',', pos);
        auto name = csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                               : comma - pos);
        for (auto& c : name)
            if (c == '-') c = '_';
        ops.push_back(perturb_operator_from_string(name));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return ops;
}

// A directory walks into one CorpusFile per regular file, attributed to its
// first path component; anything else is read as CorpusFile JSONL.
std::vector<CorpusFile> load_corpus(const std::string& input) {
    if (input == "-" || !fs::is_directory(input)) return read_records<CorpusFile>(input);

    const fs::path root(input);
    std::vector<CorpusFile> corpus;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        CorpusFile file;
        const auto rel = fs::relative(entry.path(), root);
        file.path = rel.generic_string();
        file.repo = rel.has_parent_path() ? rel.begin()->generic_string()
                                          : root.filename().generic_string();
        file.content = read_file(entry.path().string());
        corpus.push_back(std::move(file));
    }
    std::sort(corpus.begin(), corpus.end(),
              [](const CorpusFile& a, const CorpusFile& b) { return a.path < b.path; });
    return corpus;
}

void print_group(std::ostream& out, const std::string& label, const GroupScores& g) {
    out << std::left << std::setw(28) << label << std::right << std::fixed
        << std::setprecision(2) << "  n=" << std::setw(6) << g.n
        << "  em=" << std::setw(6) << g.em_rate << "  es=" << std::setw(6) << g.es_mean
        << "  parse_fail=" << std::setw(6) << g.parse_failure_rate << "\n";
}

void print_report(std::ostream& out, const ScoreReport& report) {
    print_group(out, "overall",
                GroupScores{report.n, report.em_rate, report.es_mean,
                            report.parse_failure_rate});
    for (const auto& [name, scores] : report.per_category)
        print_group(out, "category " + name, scores);
    for (const auto& [name, scores] : report.per_benchmark)
        print_group(out, "benchmark " + name, scores);
}

struct SynthArgs {
    std::string input, output;
    std::size_t count = 100;
    std::uint64_t seed = 0;
    std::string ratio = "2:1:1:1";
    int limit = 10;
};

int run_synth(const SynthArgs& args) {
    const auto corpus = load_corpus(args.input);
    const auto samples = sample_tasks(corpus, parse_ratio(args.ratio), args.count,
                                      args.seed, RegionLimit{args.limit});
    OutputTarget out(args.output);
    write_jsonl(out.stream(), samples);
    return 0;
}

struct PerturbArgs {
    std::string input, output, operators;
    std::size_t count = 2;
    int window = 5;
    std::uint64_t seed = 0;
    bool annotate = false;
};

int run_perturb(const PerturbArgs& args) {
    const auto samples = read_records<SriSample>(args.input);
    const auto ops = parse_operators(args.operators);
    OutputTarget out(args.output);

    std::size_t failures = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& sample = samples[i];
        try {
            const auto flex = perturb_window(sample.task, ops, args.count, args.window,
                                             args.seed + i);
            nlohmann::json line = flex;
            if (args.annotate) line["annotated"] = annotate_perturbations(flex);
            out.stream() << line.dump() << "\n";
        } catch (const NothingToPerturb& e) {
            ++failures;
            std::cerr << sample.task.task_id << ": " << e.what() << "\n";
        }
    }
    return failures == 0 ? 0 : 1;
}

struct PromptArgs {
    std::string input, output, style = "sri";
    int limit = 10;
};

int run_prompt(const PromptArgs& args) {
    const auto style = prompt_style_from_string(args.style);
    const auto samples = read_records<SriSample>(args.input);
    OutputTarget out(args.output);

    PromptOptions options;
    options.region_limit = RegionLimit{args.limit}.lines_each_side();

    std::size_t failures = 0;
    for (const auto& sample : samples) {
        try {
            const auto bundle =
                build_prompt(sample.task, style, Marker{}, ContextBudget{}, options);
            const nlohmann::json line = {{"task_id", sample.task.task_id},
                                         {"style", std::string(to_string(style))},
                                         {"system", bundle.system},
                                         {"user", bundle.user},
                                         {"raw", bundle.raw}};
            out.stream() << line.dump() << "\n";
        } catch (const budget_error& e) {
            ++failures;
            std::cerr << sample.task.task_id << ": " << e.what() << "\n";
        }
    }
    return failures == 0 ? 0 : 1;
}

int run_extract() {
    const auto result = extract_replace_code(read_stream(std::cin));
    std::cout << result.middle;
    return result.branch == ExtractionBranch::no_replace ? 1 : 0;
}

struct ApplyArgs {
    std::string file, block, output;
    int context = 3;
    bool dry_run = false, nearest = false;
};

SriBlock read_block(const std::string& block_path) {
    const auto raw = block_path.empty() ? read_stream(std::cin) : read_file(block_path);
    const auto block = parse_sri_block(raw);
    if (!block)
        throw std::runtime_error("input carries no search/replace block");
    return *block;
}

int run_apply(const ApplyArgs& args) {
    const auto source = read_file(args.file);
    const auto block = read_block(args.block);
    const ApplyOptions options{args.nearest};

    if (args.dry_run) {
        std::cout << to_unified_diff(source, block, args.file, args.context, Marker{},
                                     options);
        return 0;
    }

    const auto patched = apply_sri(source, block, Marker{}, options);
    if (args.output.empty()) {
        std::ofstream out(args.file, std::ios::binary | std::ios::trunc);
        if (!out) throw std::invalid_argument("cannot write file: " + args.file);
        out << patched;
    } else {
        OutputTarget out(args.output);
        out.stream() << patched;
    }
    return 0;
}

struct DiffArgs {
    std::string file, block;
    int context = 3;
    bool nearest = false;
};

int run_diff(const DiffArgs& args) {
    const auto source = read_file(args.file);
    const auto block = read_block(args.block);
    std::cout << to_unified_diff(source, block, args.file, args.context, Marker{},
                                 ApplyOptions{args.nearest});
    return 0;
}

struct EvalArgs {
    std::string input, records, report, style = "sri", endpoint, model;
    std::string api_key_env = "SRI_API_KEY";
    int max_tokens = 256, jobs = 4, limit = 10, attempts = 3;
    double temperature = 0.0;
};

int run_eval_command(const EvalArgs& args) {
    const auto style = prompt_style_from_string(args.style);
    const auto samples = read_records<SriSample>(args.input);

    InferenceConfig cfg;
    cfg.endpoint_url = args.endpoint;
    cfg.model_name = args.model;
    cfg.max_output_tokens = args.max_tokens;
    cfg.max_concurrency = args.jobs;
    cfg.temperature = args.temperature;
    cfg.retry.attempts = args.attempts;
    cfg.api_key_env = args.api_key_env;

    const auto run = run_eval(samples, style, cfg, RegionLimit{args.limit}, Marker{},
                              ContextBudget{}, args.records);

    if (args.records.empty()) write_jsonl(std::cout, run.records);
    if (!args.report.empty()) {
        std::ofstream out(args.report, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open report: " + args.report);
        out << nlohmann::json(run.report).dump(2) << "\n";
    }
    print_report(std::cerr, run.report);

    const auto errors =
        std::count_if(run.records.begin(), run.records.end(),
                      [](const EvalRecord& r) { return !r.error.empty(); });
    return errors == 0 ? 0 : 1;
}

struct ScoreArgs {
    std::string input;
    bool pretty = false;
};

int run_score(const ScoreArgs& args) {
    const auto report = aggregate(read_records<EvalRecord>(args.input));
    if (args.pretty)
        print_report(std::cout, report);
    else
        std::cout << nlohmann::json(report).dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"search-and-replace infilling toolkit"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "sample completion tasks from a corpus");
    synth->add_option("--input", synth_args.input,
                      "corpus JSONL ({path, content, repo, stars} per line) or a directory")
        ->required();
    synth->add_option("--output", synth_args.output, "sample JSONL, stdout by default");
    synth->add_option("--count", synth_args.count, "number of samples");
    synth->add_option("--seed", synth_args.seed, "random seed");
    synth->add_option("--ratio", synth_args.ratio,
                      "category mix function:logic:random:single");
    synth->add_option("--limit", synth_args.limit, "editable-region lines per side");

    PerturbArgs perturb_args;
    auto* perturb = app.add_subcommand("perturb", "perturb code around each sample's marker");
    perturb->add_option("--input", perturb_args.input, "sample JSONL")->required();
    perturb->add_option("--output", perturb_args.output, "flex-task JSONL, stdout by default");
    perturb->add_option("--count", perturb_args.count, "perturbations per task");
    perturb->add_option("--window", perturb_args.window, "lines around the marker");
    perturb->add_option("--seed", perturb_args.seed, "random seed");
    perturb->add_option("--operators", perturb_args.operators,
                        "comma-separated operator names, all by default");
    perturb->add_flag("--annotate", perturb_args.annotate,
                      "add an annotated source field marking perturbed lines");

    PromptArgs prompt_args;
    auto* prompt = app.add_subcommand("prompt", "render prompts for samples");
    prompt->add_option("--input", prompt_args.input, "sample JSONL")->required();
    prompt->add_option("--output", prompt_args.output, "prompt JSONL, stdout by default");
    prompt->add_option("--style", prompt_args.style,
                       "sri, nl-standard, nl-dialogue, nl-template or token-fim");
    prompt->add_option("--limit", prompt_args.limit, "editable-region lines per side");

    auto* extract =
        app.add_subcommand("extract", "read a model response on stdin, write the middle");

    ApplyArgs apply_args;
    auto* apply = app.add_subcommand("apply", "apply a search/replace block to a file");
    apply->add_option("--file", apply_args.file, "target file")->required();
    apply->add_option("--block", apply_args.block,
                      "file holding the model response, stdin by default");
    apply->add_option("--output", apply_args.output,
                      "write the patched text here instead of editing in place");
    apply->add_option("--context", apply_args.context, "diff context lines for --dry-run");
    apply->add_flag("--dry-run", apply_args.dry_run,
                    "print the unified diff without touching the file");
    apply->add_flag("--nearest", apply_args.nearest,
                    "resolve ambiguous anchors to the occurrence nearest the marker");

    DiffArgs diff_args;
    auto* diff = app.add_subcommand("diff", "print the unified diff a block would make");
    diff->add_option("--file", diff_args.file, "target file")->required();
    diff->add_option("--block", diff_args.block,
                     "file holding the model response, stdin by default");
    diff->add_option("--context", diff_args.context, "diff context lines");
    diff->add_flag("--nearest", diff_args.nearest,
                   "resolve ambiguous anchors to the occurrence nearest the marker");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "run samples against an inference endpoint");
    eval->add_option("--input", eval_args.input, "sample JSONL")->required();
    eval->add_option("--endpoint", eval_args.endpoint, "base URL of the API")->required();
    eval->add_option("--model", eval_args.model, "model name sent with each request");
    eval->add_option("--style", eval_args.style, "prompt style");
    eval->add_option("--max-tokens", eval_args.max_tokens, "max output tokens");
    eval->add_option("--jobs", eval_args.jobs, "concurrent requests");
    eval->add_option("--limit", eval_args.limit, "editable-region lines per side");
    eval->add_option("--attempts", eval_args.attempts, "dispatches per request");
    eval->add_option("--temperature", eval_args.temperature, "sampling temperature");
    eval->add_option("--records", eval_args.records,
                     "record journal path; enables resume, silences stdout records");
    eval->add_option("--report", eval_args.report, "write the score report JSON here");
    eval->add_option("--api-key-env", eval_args.api_key_env,
                     "environment variable holding the bearer token");

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "aggregate eval records into a report");
    score->add_option("--input", score_args.input, "record JSONL")->required();
    score->add_flag("--pretty", score_args.pretty, "print a table instead of JSON");

    int rc = 0;
    synth->callback([&] { rc = run_synth(synth_args); });
    perturb->callback([&] { rc = run_perturb(perturb_args); });
    prompt->callback([&] { rc = run_prompt(prompt_args); });
    extract->callback([&] { rc = run_extract(); });
    apply->callback([&] { rc = run_apply(apply_args); });
    diff->callback([&] { rc = run_diff(diff_args); });
    eval->callback([&] { rc = run_eval_command(eval_args); });
    score->callback([&] { rc = run_score(score_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InsufficientCorpus& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
