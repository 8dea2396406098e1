#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sri/extraction.hpp"
#include "sri/format.hpp"

// Plain data carriers shared between synthesis, prompting, evaluation and
// scoring. JSON bindings live in serialization.hpp.

namespace sri {

// One infilling task: the code around a missing middle plus optional
// repository context. prefix + middle + suffix reassemble the source region
// byte for byte.
struct CompletionTask {
    std::string prefix;
    std::string middle;
    std::string suffix;
    std::string crossfile_context;
    std::string path;
    std::string task_id;

    friend bool operator==(const CompletionTask&, const CompletionTask&) = default;
};

// Outcome of one evaluated sample. `prediction` is the text scored against
// the reference middle; for search/replace responses it comes out of
// extract_replace_code, whose branch is kept for auditing.
struct EvalRecord {
    std::string task_id;
    std::string style;
    std::string raw_response;
    ExtractionResult extraction;
    std::string prediction;
    bool parse_failed = false;
    bool em = false;
    double es = 0.0;
    std::int64_t latency_ms = 0;
    std::string error;
    std::string category;   // task category when known, for score breakdowns
    std::string benchmark;  // source benchmark when known
    std::optional<RegionReport> region;  // editable-region audit for sri styles

    friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

}  // namespace sri
