#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sri/format.hpp"
#include "sri/prompting.hpp"
#include "sri/records.hpp"
#include "sri/rng.hpp"
#include "sri/text.hpp"

// Injects controlled noise into the lines around the infill marker, producing
// the flexible-context variant of a completion task: the model must repair or
// route around the noise while filling the middle. Perturbations stay inside
// a +/-window line band, never touch the marker line, and are recorded so the
// original source can be restored exactly.

namespace sri {

enum class PerturbOperator { line_scramble, token_transpose, identifier_typo };

inline constexpr std::array<PerturbOperator, 3> kAllPerturbOperators = {
    PerturbOperator::line_scramble, PerturbOperator::token_transpose,
    PerturbOperator::identifier_typo};

inline std::string_view to_string(PerturbOperator op) {
    switch (op) {
        case PerturbOperator::line_scramble: return "line_scramble";
        case PerturbOperator::token_transpose: return "token_transpose";
        case PerturbOperator::identifier_typo: return "identifier_typo";
    }
    return "unknown";
}

inline PerturbOperator perturb_operator_from_string(std::string_view name) {
    for (const auto op : kAllPerturbOperators)
        if (name == to_string(op)) return op;
    throw std::invalid_argument("unknown perturbation operator: " + std::string(name));
}

struct Perturbation {
    std::size_t line_number = 0;  // 1-based in the marked source
    PerturbOperator op = PerturbOperator::line_scramble;
    std::string original_line;
    std::string perturbed_line;

    friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

struct FlexTask {
    CompletionTask base;
    std::string perturbed_source;
    std::vector<Perturbation> perturbations;
    int window = 5;
    std::uint64_t seed = 0;

    friend bool operator==(const FlexTask&, const FlexTask&) = default;
};

class NothingToPerturb : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_comment_only(std::string_view line) {
    const auto s = strip(line);
    return s.starts_with("//") || s.starts_with("/*") || s.starts_with("*") ||
           s.starts_with("#") || s.starts_with("--");
}

struct Token {
    std::size_t begin = 0;
    std::size_t end = 0;
};

inline std::vector<Token> identifier_tokens(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    const auto head = [](char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    const auto tail = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (i < line.size()) {
        if (!head(line[i])) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < line.size() && tail(line[j])) ++j;
        out.push_back({i, j});
        i = j;
    }
    return out;
}

// Permutes the line's non-whitespace characters in place; indentation and
// interior spacing stay where they are. Gives up when no shuffle changes
// anything (single characters, runs of one symbol).
inline std::optional<std::string> try_scramble(const std::string& line,
                                               std::mt19937_64& rng) {
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < line.size(); ++i)
        if (!is_blank(std::string_view(&line[i], 1))) slots.push_back(i);
    if (slots.size() < 2) return std::nullopt;

    bool movable = false;
    for (const auto i : slots) movable = movable || line[i] != line[slots.front()];
    if (!movable) return std::nullopt;

    for (int attempt = 0; attempt < 10; ++attempt) {
        std::string chars;
        for (const auto i : slots) chars.push_back(line[i]);
        shuffle(chars.begin(), chars.end(), rng);
        std::string out = line;
        for (std::size_t k = 0; k < slots.size(); ++k) out[slots[k]] = chars[k];
        if (out != line) return out;
    }
    return std::nullopt;
}

// Swaps two identifiers separated only by spacing, e.g.
// "foreach (var profile in items)" -> "foreach (profile var in items)".
inline std::optional<std::string> try_transpose(const std::string& line,
                                                std::mt19937_64& rng) {
    const auto tokens = identifier_tokens(line);
    std::vector<std::size_t> pairs;
    for (std::size_t k = 0; k + 1 < tokens.size(); ++k) {
        const auto between =
            std::string_view(line).substr(tokens[k].end,
                                          tokens[k + 1].begin - tokens[k].end);
        if (between.find_first_not_of(" \t") != std::string_view::npos) continue;
        if (line.compare(tokens[k].begin, tokens[k].end - tokens[k].begin,
                         line, tokens[k + 1].begin,
                         tokens[k + 1].end - tokens[k + 1].begin) == 0)
            continue;
        pairs.push_back(k);
    }
    if (pairs.empty()) return std::nullopt;

    const auto k = pairs[bounded_random(rng, pairs.size())];
    const auto& a = tokens[k];
    const auto& b = tokens[k + 1];
    std::string out = line.substr(0, a.begin);
    out += line.substr(b.begin, b.end - b.begin);
    out += line.substr(a.end, b.begin - a.end);
    out += line.substr(a.begin, a.end - a.begin);
    out += line.substr(b.end);
    return out;
}

// Replaces one character inside one identifier with a different letter.
inline std::optional<std::string> try_typo(const std::string& line,
                                           std::mt19937_64& rng) {
    const auto tokens = identifier_tokens(line);
    if (tokens.empty()) return std::nullopt;
    const auto& token = tokens[bounded_random(rng, tokens.size())];
    const auto at = token.begin + bounded_random(rng, token.end - token.begin);

    std::string letters = "abcdefghijklmnopqrstuvwxyz";
    letters.erase(std::remove(letters.begin(), letters.end(), line[at]), letters.end());
    std::string out = line;
    out[at] = letters[bounded_random(rng, letters.size())];
    return out;
}

inline std::optional<std::string> try_operator(PerturbOperator op, const std::string& line,
                                               std::mt19937_64& rng) {
    switch (op) {
        case PerturbOperator::line_scramble: return try_scramble(line, rng);
        case PerturbOperator::token_transpose: return try_transpose(line, rng);
        case PerturbOperator::identifier_typo: return try_typo(line, rng);
    }
    return std::nullopt;
}

}  // namespace detail

// Builds a FlexTask: inserts the marker, picks up to `count` distinct
// nonblank, non-comment lines within `window` lines of the marker, and
// applies one operator to each. The operator is drawn from `operators` per
// line; when it cannot change the line, the remaining operators are tried in
// declaration order before the line is given up on. Deterministic in `seed`.
inline FlexTask perturb_window(const CompletionTask& task,
                               const std::vector<PerturbOperator>& operators,
                               std::size_t count, int window, std::uint64_t seed,
                               const Marker& marker = Marker{}) {
    if (operators.empty())
        throw std::invalid_argument("perturb_window: need at least one operator");
    if (window < 0) throw std::invalid_argument("perturb_window: window must be >= 0");

    const std::string marked = insert_marker(task, marker);
    const auto line_views = split_lines(marked);
    std::vector<std::string> lines(line_views.begin(), line_views.end());

    std::size_t marker_line = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].find(marker.text) != std::string::npos) {
            marker_line = i;
            break;
        }
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i == marker_line) continue;
        const auto distance = i > marker_line ? i - marker_line : marker_line - i;
        if (distance > static_cast<std::size_t>(window)) continue;
        if (is_blank(lines[i]) || detail::is_comment_only(lines[i])) continue;
        candidates.push_back(i);
    }
    if (candidates.empty())
        throw NothingToPerturb("no perturbable line within " + std::to_string(window) +
                               " lines of the marker");

    std::mt19937_64 rng(seed);
    detail::shuffle(candidates.begin(), candidates.end(), rng);

    FlexTask flex;
    flex.base = task;
    flex.window = window;
    flex.seed = seed;

    for (const auto i : candidates) {
        if (flex.perturbations.size() == count) break;
        const auto first = operators[detail::bounded_random(rng, operators.size())];
        std::vector<PerturbOperator> order{first};
        for (const auto op : operators)
            if (op != first) order.push_back(op);

        for (const auto op : order) {
            const auto perturbed = detail::try_operator(op, lines[i], rng);
            if (!perturbed || *perturbed == lines[i]) continue;
            flex.perturbations.push_back({i + 1, op, lines[i], *perturbed});
            lines[i] = *perturbed;
            break;
        }
    }
    if (flex.perturbations.empty())
        throw NothingToPerturb("no operator could change any line in the window");

    flex.perturbed_source = join_lines(lines);
    if (marked.ends_with("\n")) flex.perturbed_source += "\n";
    return flex;
}

inline FlexTask perturb_window(const CompletionTask& task, std::uint64_t seed,
                               const Marker& marker = Marker{}) {
    return perturb_window(
        task, {kAllPerturbOperators.begin(), kAllPerturbOperators.end()}, 2, 5, seed,
        marker);
}

// Human-inspection rendering: perturbed lines wrapped in @ ... @ sentinels.
// Never feed this to a model or a parser.
inline std::string annotate_perturbations(const FlexTask& flex) {
    const auto views = split_lines(flex.perturbed_source);
    std::vector<std::string> lines(views.begin(), views.end());
    for (const auto& p : flex.perturbations) {
        auto& line = lines[p.line_number - 1];
        const auto indent = indentation_of(line);
        line = std::string(indent) + "@ " + std::string(lstrip(line)) + " @";
    }
    auto out = join_lines(lines);
    if (flex.perturbed_source.ends_with("\n")) out += "\n";
    return out;
}

}  // namespace sri
