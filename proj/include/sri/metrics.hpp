#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sri/records.hpp"
#include "sri/text.hpp"

// Scoring primitives for infilling predictions. Both text metrics strip the
// whole string on each side first, so surrounding whitespace and trailing
// newlines never count against a prediction.

namespace sri {

// Character-level edit distance, two rows of DP.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                               diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

inline bool exact_match(std::string_view prediction, std::string_view reference) {
    return strip(prediction) == strip(reference);
}

// 100 * (1 - distance / max(len_pred, len_ref, 1)), in [0, 100].
inline double edit_similarity(std::string_view prediction, std::string_view reference) {
    const auto p = strip(prediction);
    const auto r = strip(reference);
    const auto denom = std::max({p.size(), r.size(), std::size_t{1}});
    return 100.0 * (1.0 - static_cast<double>(levenshtein(p, r)) / static_cast<double>(denom));
}

// exp of the negative mean token log-probability.
inline double perplexity(const std::vector<double>& token_logprobs) {
    if (token_logprobs.empty())
        throw std::invalid_argument("perplexity: empty logprob sequence");
    const double mean =
        std::accumulate(token_logprobs.begin(), token_logprobs.end(), 0.0) /
        static_cast<double>(token_logprobs.size());
    return std::exp(-mean);
}

struct GroupScores {
    std::size_t n = 0;
    double em_rate = 0.0;
    double es_mean = 0.0;
    double parse_failure_rate = 0.0;

    friend bool operator==(const GroupScores&, const GroupScores&) = default;
};

struct ScoreReport {
    std::size_t n = 0;
    double em_rate = 0.0;             // percent
    double es_mean = 0.0;             // mean of per-sample ES, 0..100
    double parse_failure_rate = 0.0;  // percent
    std::map<std::string, GroupScores> per_category;
    std::map<std::string, GroupScores> per_benchmark;
    std::vector<std::string> notes;   // conventions the numbers depend on

    friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

// Rolls eval records up into rates. Parse failures are already reflected in
// the records themselves (em=false, es against the empty prediction), so the
// roll-up just averages; an empty input yields n=0 with zeroed rates rather
// than an error.
inline ScoreReport aggregate(const std::vector<EvalRecord>& records) {
    ScoreReport report;
    report.notes = {
        "em: exact match after whole-string whitespace strip",
        "es: 100*(1 - levenshtein/max(len)) on whole-string-stripped text",
        "parse failures score against the empty prediction",
    };
    report.n = records.size();
    if (records.empty()) return report;

    struct Tally {
        std::size_t n = 0, em = 0, failed = 0;
        double es = 0.0;
    };
    Tally total;
    std::map<std::string, Tally> by_category, by_benchmark;

    for (const auto& rec : records) {
        auto add = [&rec](Tally& t) {
            ++t.n;
            t.em += rec.em ? 1 : 0;
            t.failed += rec.parse_failed ? 1 : 0;
            t.es += rec.es;
        };
        add(total);
        if (!rec.category.empty()) add(by_category[rec.category]);
        if (!rec.benchmark.empty()) add(by_benchmark[rec.benchmark]);
    }

    const auto to_scores = [](const Tally& t) {
        GroupScores g;
        g.n = t.n;
        if (t.n == 0) return g;
        g.em_rate = 100.0 * static_cast<double>(t.em) / static_cast<double>(t.n);
        g.es_mean = t.es / static_cast<double>(t.n);
        g.parse_failure_rate = 100.0 * static_cast<double>(t.failed) / static_cast<double>(t.n);
        return g;
    };

    const auto t = to_scores(total);
    report.em_rate = t.em_rate;
    report.es_mean = t.es_mean;
    report.parse_failure_rate = t.parse_failure_rate;
    for (const auto& [k, v] : by_category) report.per_category[k] = to_scores(v);
    for (const auto& [k, v] : by_benchmark) report.per_benchmark[k] = to_scores(v);
    return report;
}

}  // namespace sri
