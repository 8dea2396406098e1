#pragma once

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "sri/extraction.hpp"
#include "sri/format.hpp"
#include "sri/metrics.hpp"
#include "sri/prompting.hpp"
#include "sri/records.hpp"
#include "sri/serialization.hpp"
#include "sri/synthesis.hpp"
#include "sri/text.hpp"

// Evaluation harness: renders prompts, talks to an OpenAI-compatible
// endpoint, extracts predictions and scores them. Chat styles go to
// .../chat/completions; token_fim goes to a raw .../completions endpoint.

namespace sri {

struct RetryPolicy {
    int attempts = 3;  // total dispatches per request, not extra retries
    std::chrono::milliseconds backoff{200};
};

struct InferenceConfig {
    std::string endpoint_url;  // scheme://host[:port][/base-path]
    std::string model_name;
    double temperature = 0.0;
    int max_output_tokens = 256;
    double presence_penalty = 0.0;
    int max_concurrency = 4;
    RetryPolicy retry;
    std::string api_key_env = "SRI_API_KEY";  // bearer token read from here if set
};

enum class CompletionStatus { ok, transport, http_status, malformed_response };

inline std::string_view to_string(CompletionStatus status) {
    switch (status) {
        case CompletionStatus::ok: return "ok";
        case CompletionStatus::transport: return "transport";
        case CompletionStatus::http_status: return "http_status";
        case CompletionStatus::malformed_response: return "malformed_response";
    }
    return "unknown";
}

struct CompletionOutcome {
    CompletionStatus status = CompletionStatus::ok;
    std::string text;    // first choice's content when status == ok
    int http_code = 0;   // last HTTP status seen, 0 if none
    int attempts = 0;    // dispatches actually made
    std::string error;

    bool ok() const { return status == CompletionStatus::ok; }
};

namespace detail {

struct ParsedEndpoint {
    std::string base;  // scheme://host[:port]
    std::string path;  // leading base path, possibly empty
};

inline ParsedEndpoint parse_endpoint(std::string url) {
    if (url.find("://") == std::string::npos) url = "http://" + url;
    const auto host_start = url.find("://") + 3;
    const auto slash = url.find('/', host_start);
    if (slash == std::string::npos) return {url, {}};
    return {url.substr(0, slash), url.substr(slash)};
}

// Appends the standard route unless the URL already names a completions
// endpoint, so both ".../v1" and full paths work.
inline std::string completion_path(std::string path, bool chat) {
    while (!path.empty() && path.back() == '/') path.pop_back();
    if (path.ends_with("completions")) return path;
    return path + (chat ? "/chat/completions" : "/completions");
}

inline void validate_config(const InferenceConfig& cfg) {
    if (cfg.endpoint_url.empty())
        throw std::invalid_argument("InferenceConfig: endpoint_url is required");
    if (cfg.max_output_tokens <= 0)
        throw std::invalid_argument("InferenceConfig: max_output_tokens must be positive");
    if (cfg.temperature < 0.0)
        throw std::invalid_argument("InferenceConfig: temperature must be >= 0");
    if (cfg.max_concurrency < 1)
        throw std::invalid_argument("InferenceConfig: max_concurrency must be >= 1");
    if (cfg.retry.attempts < 1)
        throw std::invalid_argument("InferenceConfig: retry.attempts must be >= 1");
}

}  // namespace detail

// One request with retries. Transport failures and 5xx responses are retried
// up to retry.attempts dispatches; other failures are terminal. Never throws
// for wire-level problems, only for bad configuration.
inline CompletionOutcome complete(const PromptBundle& bundle, const InferenceConfig& cfg) {
    detail::validate_config(cfg);

    const auto endpoint = detail::parse_endpoint(cfg.endpoint_url);
    const bool chat = bundle.style != PromptStyle::token_fim;
    const auto path = detail::completion_path(endpoint.path, chat);

    nlohmann::json body = {{"model", cfg.model_name},
                           {"temperature", cfg.temperature},
                           {"max_tokens", cfg.max_output_tokens},
                           {"presence_penalty", cfg.presence_penalty}};
    if (chat)
        body["messages"] = {{{"role", "system"}, {"content", bundle.system}},
                            {{"role", "user"}, {"content", bundle.user}}};
    else
        body["prompt"] = bundle.raw;
    const std::string payload = body.dump();

    httplib::Client client(endpoint.base);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(std::chrono::seconds(300));
    if (!cfg.api_key_env.empty())
        if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key)
            client.set_bearer_token_auth(key);

    CompletionOutcome out;
    for (int attempt = 1; attempt <= cfg.retry.attempts; ++attempt) {
        out.attempts = attempt;
        if (attempt > 1 && cfg.retry.backoff.count() > 0)
            std::this_thread::sleep_for(cfg.retry.backoff);

        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            out.status = CompletionStatus::transport;
            out.error = httplib::to_string(res.error());
            continue;
        }
        out.http_code = res->status;
        if (res->status >= 500) {
            out.status = CompletionStatus::http_status;
            out.error = "server returned " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            out.status = CompletionStatus::http_status;
            out.error = "server returned " + std::to_string(res->status);
            return out;
        }

        const auto parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") ||
            !parsed["choices"].is_array() || parsed["choices"].empty()) {
            out.status = CompletionStatus::malformed_response;
            out.error = "response body is not a completions object";
            return out;
        }
        const auto& choice = parsed["choices"][0];
        nlohmann::json content;
        if (chat) {
            if (choice.is_object() && choice.contains("message") &&
                choice["message"].is_object() && choice["message"].contains("content"))
                content = choice["message"]["content"];
        } else {
            if (choice.is_object() && choice.contains("text")) content = choice["text"];
        }
        if (!content.is_string()) {
            out.status = CompletionStatus::malformed_response;
            out.error = "choice content is not a string";
            return out;
        }
        out.status = CompletionStatus::ok;
        out.text = content.get<std::string>();
        out.error.clear();
        return out;
    }
    return out;
}

namespace detail {

// Body of the first fenced code block. The opening fence may carry a
// language tag; an unterminated fence captures through end of text.
inline std::optional<std::string> first_fenced_block(std::string_view text) {
    std::optional<std::size_t> body_start;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        const auto line_end = eol == std::string_view::npos ? text.size() : eol;
        if (strip(text.substr(pos, line_end - pos)).starts_with("```")) {
            if (body_start) return std::string(text.substr(*body_start, pos - *body_start));
            if (eol == std::string_view::npos) return std::string{};
            body_start = eol + 1;
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    if (body_start) return std::string(text.substr(*body_start));
    return std::nullopt;
}

inline EvalRecord evaluate_sample(const SriSample& sample, PromptStyle style,
                                  const InferenceConfig& cfg, RegionLimit limit,
                                  const Marker& marker, const ContextBudget& budget) {
    EvalRecord rec;
    rec.task_id = sample.task.task_id;
    rec.style = std::string(to_string(style));
    rec.category = std::string(to_string(sample.category));
    rec.benchmark = sample.repo;

    try {
        PromptOptions options;
        options.region_limit = limit.lines_each_side();
        const auto bundle = build_prompt(sample.task, style, marker, budget, options);

        const auto started = std::chrono::steady_clock::now();
        const auto outcome = complete(bundle, cfg);
        rec.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

        if (!outcome.ok()) {
            rec.parse_failed = true;
            rec.error = std::string(to_string(outcome.status)) + ": " + outcome.error;
        } else {
            rec.raw_response = outcome.text;
            switch (style) {
                case PromptStyle::sri:
                    rec.extraction = extract_replace_code(outcome.text, marker);
                    rec.prediction = rec.extraction.middle;
                    rec.parse_failed = rec.extraction.branch == ExtractionBranch::no_replace;
                    if (const auto block = parse_sri_block(outcome.text))
                        rec.region = validate_region(*block, marker, limit);
                    break;
                case PromptStyle::token_fim:
                    rec.prediction = outcome.text;
                    break;
                default:
                    if (const auto block = first_fenced_block(outcome.text))
                        rec.prediction = *block;
                    else
                        rec.prediction = strip_copy(outcome.text);
                    break;
            }
        }
    } catch (const std::exception& e) {
        rec.parse_failed = true;
        rec.error = e.what();
    }

    rec.em = exact_match(rec.prediction, sample.task.middle);
    rec.es = edit_similarity(rec.prediction, sample.task.middle);
    return rec;
}

}  // namespace detail

struct EvalRun {
    std::vector<EvalRecord> records;  // sorted by task_id
    ScoreReport report;
};

// Evaluates every sample against the configured endpoint. Per-sample
// failures land in their records; only configuration errors throw. With a
// journal path, finished records are appended as they complete so an
// interrupted run can resume: journal entries matching a sample's task_id
// and the requested style are reused instead of re-dispatched, and the file
// is compacted to the sorted record set once the run finishes.
inline EvalRun run_eval(const std::vector<SriSample>& samples, PromptStyle style,
                        const InferenceConfig& cfg, RegionLimit limit = RegionLimit{},
                        const Marker& marker = Marker{},
                        const ContextBudget& budget = ContextBudget{},
                        const std::string& journal_path = {}) {
    detail::validate_config(cfg);

    std::unordered_map<std::string, EvalRecord> previous;
    if (!journal_path.empty()) {
        std::ifstream in(journal_path);
        if (in)
            for (auto& rec : read_jsonl<EvalRecord>(in))
                previous.insert_or_assign(rec.task_id, std::move(rec));
    }

    const auto style_name = std::string(to_string(style));
    EvalRun run;
    run.records.reserve(samples.size());
    std::vector<const SriSample*> pending;
    for (const auto& sample : samples) {
        const auto it = previous.find(sample.task.task_id);
        if (it != previous.end() && it->second.style == style_name)
            run.records.push_back(it->second);
        else
            pending.push_back(&sample);
    }

    std::ofstream journal;
    if (!journal_path.empty()) {
        journal.open(journal_path, std::ios::app);
        if (!journal)
            throw std::runtime_error("run_eval: cannot open journal " + journal_path);
    }

    std::vector<EvalRecord> fresh(pending.size());
    std::atomic<std::size_t> cursor{0};
    std::mutex sink_mutex;
    auto worker = [&] {
        for (;;) {
            const auto i = cursor.fetch_add(1);
            if (i >= pending.size()) return;
            auto rec = detail::evaluate_sample(*pending[i], style, cfg, limit, marker, budget);
            if (journal.is_open()) {
                const std::lock_guard<std::mutex> hold(sink_mutex);
                journal << nlohmann::json(rec).dump() << "\n" << std::flush;
            }
            fresh[i] = std::move(rec);
        }
    };

    const auto width = static_cast<std::size_t>(std::clamp(cfg.max_concurrency, 1, 256));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < width && t < std::max<std::size_t>(pending.size(), 1); ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    run.records.insert(run.records.end(), std::make_move_iterator(fresh.begin()),
                       std::make_move_iterator(fresh.end()));
    std::sort(run.records.begin(), run.records.end(),
              [](const EvalRecord& a, const EvalRecord& b) { return a.task_id < b.task_id; });

    if (journal.is_open()) {
        journal.close();
        std::ofstream compacted(journal_path, std::ios::trunc);
        write_jsonl(compacted, run.records);
    }

    run.report = aggregate(run.records);
    return run;
}

}  // namespace sri
