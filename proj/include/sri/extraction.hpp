#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "sri/format.hpp"
#include "sri/text.hpp"

// Recovers the generated middle code from a raw SEARCH/REPLACE response.
//
// The algorithm works on the raw response text, not a parsed block, because
// real model output is messy: sections go missing, the marker lands mid-line,
// the replacement drops context lines. Each rescue path is tagged with the
// branch that produced it so downstream consumers can audit recovery quality.
//
// Stripping is deliberately uneven and load-bearing: both sections are
// whitespace-stripped as whole strings up front, while the per-branch trims
// remove newlines only. Changing any of it changes what the extractor returns
// on thousands of real responses, so the differential fixtures in the test
// suite pin the behavior.

namespace sri {

enum class ExtractionBranch {
    no_replace,            // response had no replace section; middle is ""
    no_search,             // replace-only block; raw capture returned untouched
    inline_prefix,         // no marker; replace starts with search
    inline_suffix,         // no marker; replace ends with search
    inline_common,         // no marker; common affixes trimmed off
    fallback_full_replace, // no marker and search or replace empty after strip
    marker_first_line,     // marker on the first search line
    marker_last_line,      // marker on the last search line
    marker_general,        // marker interior; prefix/suffix context removed
};

inline std::string_view to_string(ExtractionBranch b) {
    switch (b) {
        case ExtractionBranch::no_replace: return "no_replace";
        case ExtractionBranch::no_search: return "no_search";
        case ExtractionBranch::inline_prefix: return "inline_prefix";
        case ExtractionBranch::inline_suffix: return "inline_suffix";
        case ExtractionBranch::inline_common: return "inline_common";
        case ExtractionBranch::fallback_full_replace: return "fallback_full_replace";
        case ExtractionBranch::marker_first_line: return "marker_first_line";
        case ExtractionBranch::marker_last_line: return "marker_last_line";
        case ExtractionBranch::marker_general: return "marker_general";
    }
    return "unknown";
}

struct ExtractionResult {
    std::string middle;
    ExtractionBranch branch = ExtractionBranch::no_replace;

    friend bool operator==(const ExtractionResult&, const ExtractionResult&) = default;
};

namespace detail {

struct TrimOutcome {
    std::string middle;
    ExtractionBranch branch;
};

// Middle recovery when the search section carries no marker: the search text
// is then some affix context the model echoed, and the middle is whatever the
// replace adds beyond it. Longest-common-affix trimming handles replacements
// that embed the new code inside echoed context; overlapping affixes clamp to
// an empty result rather than walking past each other.
inline TrimOutcome diff_trim_impl(std::string_view search, std::string_view replace) {
    if (search.empty() || replace.empty())
        return {std::string(replace), ExtractionBranch::fallback_full_replace};

    if (replace.starts_with(search))
        return {std::string(replace.substr(search.size())), ExtractionBranch::inline_prefix};
    if (replace.ends_with(search))
        return {std::string(replace.substr(0, replace.size() - search.size())),
                ExtractionBranch::inline_suffix};

    std::size_t i = 0;
    while (i < search.size() && i < replace.size() && search[i] == replace[i]) ++i;

    std::size_t j = 0;
    while (j < search.size() && j < replace.size() &&
           search[search.size() - 1 - j] == replace[replace.size() - 1 - j])
        ++j;

    if (i + j >= replace.size())
        return {std::string(), ExtractionBranch::inline_common};
    return {std::string(replace.substr(i, replace.size() - j - i)),
            ExtractionBranch::inline_common};
}

}  // namespace detail

// Trims echoed search context off a replace section that has no marker.
inline std::string diff_trim(std::string_view search, std::string_view replace) {
    return detail::diff_trim_impl(search, replace).middle;
}

inline ExtractionResult extract_replace_code(std::string_view raw_text,
                                             const Marker& marker = Marker{}) {
    const std::string normalized = normalize_newlines(raw_text);
    const std::string_view text = normalized;
    const auto search_match = detail::match_search_section(text);
    const auto replace_match = detail::match_replace_section(text);

    if (!replace_match) return {"", ExtractionBranch::no_replace};

    const std::string_view replace_raw =
        text.substr(replace_match->begin, replace_match->end - replace_match->begin);
    if (!search_match)
        return {std::string(replace_raw), ExtractionBranch::no_search};

    const std::string_view search_raw =
        text.substr(search_match->begin, search_match->end - search_match->begin);
    const std::string_view search_code = strip(search_raw);
    const std::string_view replace_code = strip(replace_raw);

    const auto marker_pos = search_code.find(marker.text);
    if (marker_pos == std::string_view::npos) {
        const auto out = detail::diff_trim_impl(search_code, replace_code);
        return {out.middle, out.branch};
    }

    // Split at the first marker occurrence. Keep the raw halves around the
    // marker text itself, so the marker line's indentation stays in `before`.
    std::string_view before = search_code.substr(0, marker_pos);
    std::string_view after = search_code.substr(marker_pos + marker.text.size());
    before = rstrip_newlines(before);
    after = lstrip_newlines(after);

    if (is_blank(before)) {
        if (after.empty())
            return {std::string(strip_newlines(replace_code)), ExtractionBranch::marker_first_line};
        const auto cut = replace_code.find(after);
        const std::string_view head =
            cut == std::string_view::npos ? replace_code : replace_code.substr(0, cut);
        return {std::string(strip_newlines(head)), ExtractionBranch::marker_first_line};
    }

    if (is_blank(after)) {
        const std::string_view tail =
            replace_code.substr(std::min(before.size(), replace_code.size()));
        return {std::string(strip_newlines(tail)), ExtractionBranch::marker_last_line};
    }

    std::string_view result = replace_code;

    if (result.starts_with(before)) {
        result = lstrip_newlines(result.substr(before.size()));
    } else {
        const auto nl = before.find_last_of('\n');
        const std::string_view last_line_before =
            nl == std::string_view::npos ? before : before.substr(nl + 1);
        if (result.starts_with(last_line_before))
            result = result.substr(last_line_before.size());
    }

    if (result.ends_with(after)) {
        result = rstrip_newlines(result.substr(0, result.size() - after.size()));
    } else {
        const auto nl = after.find('\n');
        const std::string_view first_line_after =
            nl == std::string_view::npos ? after : after.substr(0, nl);
        if (result.ends_with(first_line_after))
            result = result.substr(0, result.size() - first_line_after.size());
    }

    return {std::string(strip_newlines(result)), ExtractionBranch::marker_general};
}

}  // namespace sri
