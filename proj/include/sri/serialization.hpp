#pragma once

#include <istream>
#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "sri/extraction.hpp"
#include "sri/format.hpp"
#include "sri/metrics.hpp"
#include "sri/perturbation.hpp"
#include "sri/records.hpp"
#include "sri/synthesis.hpp"
#include "sri/text.hpp"

// JSON bindings for the record types, plus line-delimited (JSONL) stream
// helpers. Field names are the snake_case struct member names; enums travel
// as their string forms so the files stay greppable.

namespace sri {

inline void to_json(nlohmann::json& j, const CompletionTask& t) {
    j = {{"task_id", t.task_id},       {"path", t.path},
         {"prefix", t.prefix},         {"middle", t.middle},
         {"suffix", t.suffix},         {"crossfile_context", t.crossfile_context}};
}

inline void from_json(const nlohmann::json& j, CompletionTask& t) {
    t.task_id = j.value("task_id", "");
    t.path = j.value("path", "");
    t.prefix = j.value("prefix", "");
    t.middle = j.value("middle", "");
    t.suffix = j.value("suffix", "");
    t.crossfile_context = j.value("crossfile_context", "");
}

inline void to_json(nlohmann::json& j, const SriBlock& b) {
    j = {{"search", b.search}, {"replace", b.replace}, {"fenced", b.fenced}};
}

inline void from_json(const nlohmann::json& j, SriBlock& b) {
    b.search = j.value("search", "");
    b.replace = j.value("replace", "");
    b.fenced = j.value("fenced", false);
}

inline void to_json(nlohmann::json& j, const RegionReport& r) {
    j = {{"marker_present", r.marker_present},
         {"within_window", r.within_window},
         {"replace_marker_free", r.replace_marker_free}};
}

inline void from_json(const nlohmann::json& j, RegionReport& r) {
    r.marker_present = j.value("marker_present", false);
    r.within_window = j.value("within_window", false);
    r.replace_marker_free = j.value("replace_marker_free", false);
}

inline void to_json(nlohmann::json& j, const ExtractionResult& r) {
    j = {{"middle", r.middle}, {"branch", std::string(to_string(r.branch))}};
}

inline void from_json(const nlohmann::json& j, ExtractionResult& r) {
    r.middle = j.value("middle", "");
    const auto name = j.value("branch", "no_replace");
    r.branch = ExtractionBranch::no_replace;
    for (const auto b :
         {ExtractionBranch::no_replace, ExtractionBranch::no_search,
          ExtractionBranch::inline_prefix, ExtractionBranch::inline_suffix,
          ExtractionBranch::inline_common, ExtractionBranch::fallback_full_replace,
          ExtractionBranch::marker_first_line, ExtractionBranch::marker_last_line,
          ExtractionBranch::marker_general})
        if (name == to_string(b)) r.branch = b;
}

inline void to_json(nlohmann::json& j, const EvalRecord& r) {
    j = {{"task_id", r.task_id},
         {"style", r.style},
         {"raw_response", r.raw_response},
         {"extraction", r.extraction},
         {"prediction", r.prediction},
         {"parse_failed", r.parse_failed},
         {"em", r.em},
         {"es", r.es},
         {"latency_ms", r.latency_ms},
         {"error", r.error},
         {"category", r.category},
         {"benchmark", r.benchmark}};
    if (r.region) j["region"] = *r.region;
}

inline void from_json(const nlohmann::json& j, EvalRecord& r) {
    r.task_id = j.value("task_id", "");
    r.style = j.value("style", "");
    r.raw_response = j.value("raw_response", "");
    if (j.contains("extraction")) j.at("extraction").get_to(r.extraction);
    r.prediction = j.value("prediction", "");
    r.parse_failed = j.value("parse_failed", false);
    r.em = j.value("em", false);
    r.es = j.value("es", 0.0);
    r.latency_ms = j.value("latency_ms", std::int64_t{0});
    r.error = j.value("error", "");
    r.category = j.value("category", "");
    r.benchmark = j.value("benchmark", "");
    if (j.contains("region")) r.region = j.at("region").get<RegionReport>();
}

inline void to_json(nlohmann::json& j, const BlockSpan& b) {
    j = {{"category", std::string(to_string(b.category))},
         {"start_line", b.start_line},
         {"end_line", b.end_line},
         {"source_path", b.source_path}};
}

inline void from_json(const nlohmann::json& j, BlockSpan& b) {
    b.category = task_category_from_string(j.value("category", "random_span"));
    b.start_line = j.value("start_line", std::size_t{1});
    b.end_line = j.value("end_line", std::size_t{1});
    b.source_path = j.value("source_path", "");
}

inline void to_json(nlohmann::json& j, const CorpusFile& f) {
    j = {{"path", f.path}, {"content", f.content}, {"repo", f.repo}, {"stars", f.stars}};
}

inline void from_json(const nlohmann::json& j, CorpusFile& f) {
    f.path = j.value("path", "");
    f.content = j.value("content", "");
    f.repo = j.value("repo", "");
    f.stars = j.value("stars", 0LL);
}

inline void to_json(nlohmann::json& j, const SriSample& s) {
    j = {{"task", s.task},
         {"marked_source", s.marked_source},
         {"ground_truth", s.ground_truth},
         {"category", std::string(to_string(s.category))},
         {"repo", s.repo},
         {"stars", s.stars}};
}

inline void from_json(const nlohmann::json& j, SriSample& s) {
    if (j.contains("task")) j.at("task").get_to(s.task);
    s.marked_source = j.value("marked_source", "");
    if (j.contains("ground_truth")) j.at("ground_truth").get_to(s.ground_truth);
    s.category = task_category_from_string(j.value("category", "random_span"));
    s.repo = j.value("repo", "");
    s.stars = j.value("stars", 0LL);
}

inline void to_json(nlohmann::json& j, const Perturbation& p) {
    j = {{"line_number", p.line_number},
         {"operator", std::string(to_string(p.op))},
         {"original_line", p.original_line},
         {"perturbed_line", p.perturbed_line}};
}

inline void from_json(const nlohmann::json& j, Perturbation& p) {
    p.line_number = j.value("line_number", std::size_t{0});
    p.op = perturb_operator_from_string(j.value("operator", "line_scramble"));
    p.original_line = j.value("original_line", "");
    p.perturbed_line = j.value("perturbed_line", "");
}

inline void to_json(nlohmann::json& j, const FlexTask& f) {
    j = {{"base", f.base},
         {"perturbed_source", f.perturbed_source},
         {"perturbations", f.perturbations},
         {"window", f.window},
         {"seed", f.seed}};
}

inline void from_json(const nlohmann::json& j, FlexTask& f) {
    if (j.contains("base")) j.at("base").get_to(f.base);
    f.perturbed_source = j.value("perturbed_source", "");
    if (j.contains("perturbations"))
        j.at("perturbations").get_to(f.perturbations);
    f.window = j.value("window", 5);
    f.seed = j.value("seed", std::uint64_t{0});
}

inline void to_json(nlohmann::json& j, const GroupScores& g) {
    j = {{"n", g.n},
         {"em_rate", g.em_rate},
         {"es_mean", g.es_mean},
         {"parse_failure_rate", g.parse_failure_rate}};
}

inline void from_json(const nlohmann::json& j, GroupScores& g) {
    g.n = j.value("n", std::size_t{0});
    g.em_rate = j.value("em_rate", 0.0);
    g.es_mean = j.value("es_mean", 0.0);
    g.parse_failure_rate = j.value("parse_failure_rate", 0.0);
}

inline void to_json(nlohmann::json& j, const ScoreReport& r) {
    j = {{"n", r.n},
         {"em_rate", r.em_rate},
         {"es_mean", r.es_mean},
         {"parse_failure_rate", r.parse_failure_rate},
         {"per_category", r.per_category},
         {"per_benchmark", r.per_benchmark},
         {"notes", r.notes}};
}

inline void from_json(const nlohmann::json& j, ScoreReport& r) {
    r.n = j.value("n", std::size_t{0});
    r.em_rate = j.value("em_rate", 0.0);
    r.es_mean = j.value("es_mean", 0.0);
    r.parse_failure_rate = j.value("parse_failure_rate", 0.0);
    if (j.contains("per_category")) j.at("per_category").get_to(r.per_category);
    if (j.contains("per_benchmark")) j.at("per_benchmark").get_to(r.per_benchmark);
    if (j.contains("notes")) j.at("notes").get_to(r.notes);
}

// One JSON object per line. Blank lines are skipped on read so journals can
// be concatenated or hand-edited.
template <typename T>
inline void write_jsonl(std::ostream& out, const std::vector<T>& records) {
    for (const auto& record : records)
        out << nlohmann::json(record).dump() << "\n";
}

template <typename T>
inline std::vector<T> read_jsonl(std::istream& in) {
    std::vector<T> out;
    std::string line;
    while (std::getline(in, line)) {
        if (strip(line).empty()) continue;
        out.push_back(nlohmann::json::parse(line).get<T>());
    }
    return out;
}

}  // namespace sri
