#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sri/format.hpp"
#include "sri/prompts.hpp"
#include "sri/records.hpp"
#include "sri/text.hpp"

// Prompt assembly for the five evaluated styles. Whatever the style, the task
// is trimmed to the context budget first and the trimmed prefix, suffix and
// crossfile context are embedded verbatim, so style comparisons see identical
// inputs.

namespace sri {

enum class PromptStyle { sri, nl_standard, nl_dialogue, nl_template, token_fim };

inline std::string_view to_string(PromptStyle style) {
    switch (style) {
        case PromptStyle::sri: return "sri";
        case PromptStyle::nl_standard: return "nl-standard";
        case PromptStyle::nl_dialogue: return "nl-dialogue";
        case PromptStyle::nl_template: return "nl-template";
        case PromptStyle::token_fim: return "token-fim";
    }
    return "unknown";
}

inline PromptStyle prompt_style_from_string(std::string_view name) {
    std::string s(name);
    for (auto& c : s)
        if (c == '_') c = '-';
    if (s == "sri") return PromptStyle::sri;
    if (s == "nl-standard") return PromptStyle::nl_standard;
    if (s == "nl-dialogue") return PromptStyle::nl_dialogue;
    if (s == "nl-template") return PromptStyle::nl_template;
    if (s == "token-fim") return PromptStyle::token_fim;
    throw std::invalid_argument("unknown prompt style: " + std::string(name));
}

// Exactly one of (system, user) or raw is populated: chat styles fill the
// message pair, token_fim fills the raw completion string.
struct PromptBundle {
    PromptStyle style = PromptStyle::sri;
    std::string system;
    std::string user;
    std::string raw;

    friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

struct ContextBudget {
    std::size_t max_units = 8192;    // budget in estimation units (~tokens)
    std::size_t chars_per_unit = 4;  // characters assumed per unit
};

class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FimSentinels {
    std::string pre = "<PRE>";
    std::string suf = "<SUF>";
    std::string mid = "<MID>";
};

struct PromptOptions {
    int region_limit = 10;  // window size quoted in the sri instructions
    FimSentinels sentinels;
};

// Places the marker on its own line between prefix and suffix, indented like
// the first nonblank suffix line (or the last nonblank prefix line when the
// suffix has none). A prefix that stops mid-line is closed with a newline so
// the marker still gets a line of its own.
inline std::string insert_marker(const CompletionTask& task, const Marker& marker = Marker{}) {
    std::string_view indent;
    bool found = false;
    for (const auto line : split_lines(task.suffix)) {
        if (is_blank(line)) continue;
        indent = indentation_of(line);
        found = true;
        break;
    }
    if (!found) {
        const auto prefix_lines = split_lines(task.prefix);
        for (auto it = prefix_lines.rbegin(); it != prefix_lines.rend(); ++it) {
            if (is_blank(*it)) continue;
            indent = indentation_of(*it);
            break;
        }
    }

    std::string out = task.prefix;
    if (!out.empty() && out.back() != '\n') out += '\n';
    out += indent;
    out += marker.text;
    out += '\n';
    out += task.suffix;
    return out;
}

namespace detail {

inline std::size_t estimate_units(const CompletionTask& task, const ContextBudget& budget) {
    const auto chars =
        task.crossfile_context.size() + task.prefix.size() + task.suffix.size();
    return (chars + budget.chars_per_unit - 1) / budget.chars_per_unit;
}

// Drops whole leading lines until at most `keep_last` lines remain or the
// predicate is satisfied.
inline bool drop_leading_lines(std::string& text, std::size_t keep_last, auto over_budget) {
    while (over_budget()) {
        const auto lines = split_lines(text);
        if (lines.size() <= keep_last) return false;
        const auto cut = text.find('\n');
        if (cut == std::string::npos) return false;
        text.erase(0, cut + 1);
    }
    return true;
}

}  // namespace detail

// Shrinks a task to the budget: crossfile context goes first (oldest lines
// dropped from the top), then prefix lines from the top, then suffix lines
// from the bottom. The middle is never counted or touched; prefix and suffix
// keep at least the line adjacent to it. Trimming is idempotent.
inline CompletionTask trim_context(const CompletionTask& task, const ContextBudget& budget) {
    CompletionTask trimmed = task;
    const auto over = [&] { return detail::estimate_units(trimmed, budget) > budget.max_units; };
    if (!over()) return trimmed;

    if (!detail::drop_leading_lines(trimmed.crossfile_context, 0, over))
        trimmed.crossfile_context.clear();
    if (!over()) return trimmed;

    detail::drop_leading_lines(trimmed.prefix, 1, over);
    if (!over()) return trimmed;

    // Trim suffix from the bottom, keeping its first line.
    while (over()) {
        const auto cut = trimmed.suffix.find_last_of('\n');
        if (cut == std::string::npos) break;
        trimmed.suffix.resize(cut);
    }
    if (over())
        throw budget_error("context budget too small: even one line each side of the "
                           "marker does not fit");
    return trimmed;
}

namespace detail {

inline std::string sectioned_user_prompt(const CompletionTask& task) {
    std::string out;
    out += "##Context Code##:\n";
    out += task.crossfile_context;
    out += "\n##Prefix Code##:\n";
    out += task.prefix;
    out += "\n##Suffix Code##:\n";
    out += task.suffix;
    return out;
}

}  // namespace detail

inline PromptBundle build_prompt(const CompletionTask& task, PromptStyle style,
                                 const Marker& marker = Marker{},
                                 const ContextBudget& budget = ContextBudget{},
                                 const PromptOptions& options = PromptOptions{}) {
    const CompletionTask trimmed = trim_context(task, budget);

    PromptBundle bundle;
    bundle.style = style;
    switch (style) {
        case PromptStyle::sri: {
            bundle.system = sri_system_prompt(marker, options.region_limit);
            const auto marked = insert_marker(trimmed, marker);
            bundle.user = trimmed.crossfile_context.empty()
                              ? marked
                              : trimmed.crossfile_context + "\n" + marked;
            break;
        }
        case PromptStyle::nl_standard:
            bundle.system = std::string(kNlStandardSystemPrompt);
            bundle.user = detail::sectioned_user_prompt(trimmed);
            break;
        case PromptStyle::nl_dialogue:
            bundle.system = std::string(kNlDialogueSystemPrompt);
            bundle.user = detail::sectioned_user_prompt(trimmed);
            break;
        case PromptStyle::nl_template:
            bundle.system = std::string(kNlTemplateSystemPrompt);
            bundle.user = detail::sectioned_user_prompt(trimmed);
            break;
        case PromptStyle::token_fim: {
            const auto& s = options.sentinels;
            bundle.raw = s.pre;
            if (!trimmed.crossfile_context.empty()) {
                bundle.raw += trimmed.crossfile_context;
                bundle.raw += '\n';
            }
            bundle.raw += trimmed.prefix;
            bundle.raw += s.suf;
            bundle.raw += trimmed.suffix;
            bundle.raw += s.mid;
            break;
        }
    }
    return bundle;
}

}  // namespace sri
