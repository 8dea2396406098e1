#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sri/format.hpp"
#include "sri/text.hpp"

// Content-anchored application of SEARCH/REPLACE edits. The search section is
// located in the file by matching lines, not line numbers, so edits survive
// files shifting underneath them:
//
//   - lines compare equal after trailing-whitespace removal (leading
//     whitespace stays significant),
//   - a search line bearing the infill marker matches the file's marker line
//     by marker-ness alone, since the model may echo it imperfectly.
//
// Matching and splicing run on LF-normalized text; the file's dominant line
// ending is restored on output. Unified diffs are likewise emitted over the
// LF-normalized form.

namespace sri {

struct AnchorSpan {
    std::size_t start_byte = 0;  // [start_byte, end_byte) in the LF-normalized file,
    std::size_t end_byte = 0;    // excluding the final line's newline
    std::size_t start_line = 0;  // 1-based, inclusive
    std::size_t end_line = 0;
    int occurrence_count = 0;    // matches found in the whole file

    friend bool operator==(const AnchorSpan&, const AnchorSpan&) = default;
};

enum class AnchorStatus { ok, not_found, ambiguous };

struct AnchorOutcome {
    AnchorStatus status = AnchorStatus::not_found;
    std::optional<AnchorSpan> span;      // populated when status == ok
    std::vector<AnchorSpan> candidates;  // every match, for ambiguity handling
};

class anchor_error : public std::runtime_error {
public:
    anchor_error(AnchorStatus status, int occurrences)
        : std::runtime_error(status == AnchorStatus::not_found
                                 ? "search block not found in file"
                                 : "search block is ambiguous (" +
                                       std::to_string(occurrences) + " occurrences)"),
          status_(status),
          occurrences_(occurrences) {}

    AnchorStatus status() const { return status_; }
    int occurrences() const { return occurrences_; }

private:
    AnchorStatus status_;
    int occurrences_;
};

struct ApplyOptions {
    // On an ambiguous anchor, take the occurrence nearest the file's marker
    // line instead of refusing.
    bool nearest_to_marker = false;
};

namespace detail {

inline bool anchor_line_matches(std::string_view file_line, std::string_view search_line,
                                const Marker& marker) {
    if (rstrip(file_line) == rstrip(search_line)) return true;
    return file_line.find(marker.text) != std::string_view::npos &&
           search_line.find(marker.text) != std::string_view::npos;
}

inline std::optional<std::size_t> marker_line_of(const std::vector<std::string_view>& lines,
                                                 const Marker& marker) {
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (lines[i].find(marker.text) != std::string_view::npos) return i;
    return std::nullopt;
}

// Distance from a line to a [first, last] line range; zero inside it.
inline std::size_t distance_to_range(std::size_t line, std::size_t first, std::size_t last) {
    if (line < first) return first - line;
    if (line > last) return line - last;
    return 0;
}

}  // namespace detail

// Finds every occurrence of the search block in `file` (assumed or normalized
// LF) and reports the unique one, if any.
inline AnchorOutcome locate_anchor(std::string_view file, std::string_view search,
                                   const Marker& marker = Marker{}) {
    AnchorOutcome outcome;
    const auto search_lines = split_lines(search);
    if (search_lines.empty()) return outcome;  // nothing to anchor on

    const LineIndex index(file);
    const auto n = index.line_count();
    const auto k = search_lines.size();
    if (k > n) return outcome;

    for (std::size_t start = 0; start + k <= n; ++start) {
        bool all = true;
        for (std::size_t i = 0; i < k && all; ++i)
            all = detail::anchor_line_matches(index.line(start + i), search_lines[i], marker);
        if (!all) continue;
        AnchorSpan span;
        span.start_byte = index.line_start(start);
        span.end_byte = index.line_end(start + k - 1);
        span.start_line = start + 1;
        span.end_line = start + k;
        outcome.candidates.push_back(span);
    }

    const auto count = static_cast<int>(outcome.candidates.size());
    for (auto& c : outcome.candidates) c.occurrence_count = count;
    if (count == 0) return outcome;
    if (count == 1) {
        outcome.status = AnchorStatus::ok;
        outcome.span = outcome.candidates.front();
    } else {
        outcome.status = AnchorStatus::ambiguous;
    }
    return outcome;
}

namespace detail {

// Unique span, or the marker-nearest one when allowed. Throws otherwise.
inline AnchorSpan resolve_anchor(std::string_view lf_file, std::string_view search,
                                 const Marker& marker, const ApplyOptions& options) {
    auto outcome = locate_anchor(lf_file, search, marker);
    if (outcome.status == AnchorStatus::ok) return *outcome.span;
    if (outcome.status == AnchorStatus::not_found)
        throw anchor_error(AnchorStatus::not_found, 0);

    const auto count = static_cast<int>(outcome.candidates.size());
    if (!options.nearest_to_marker) throw anchor_error(AnchorStatus::ambiguous, count);

    const auto file_lines = split_lines(lf_file);
    const auto marker_line = marker_line_of(file_lines, marker);
    if (!marker_line) return outcome.candidates.front();

    const AnchorSpan* best = &outcome.candidates.front();
    std::size_t best_distance = std::string::npos;
    for (const auto& c : outcome.candidates) {
        const auto d = distance_to_range(*marker_line + 1, c.start_line, c.end_line);
        if (d < best_distance) {
            best_distance = d;
            best = &c;
        }
    }
    return *best;
}

}  // namespace detail

// Splices block.replace over the located span. An identity edit returns the
// file byte-for-byte; an empty replacement removes the span's lines entirely
// rather than leaving a blank line behind.
inline std::string apply_sri(std::string_view file, const SriBlock& block,
                             const Marker& marker = Marker{},
                             const ApplyOptions& options = {}) {
    if (block.replace == block.search &&
        locate_anchor(normalize_newlines(file), block.search, marker).status !=
            AnchorStatus::not_found)
        return std::string(file);

    const auto eol = detect_line_ending(file);
    const std::string lf_file = normalize_newlines(file);
    const auto span = detail::resolve_anchor(lf_file, block.search, marker, options);

    std::size_t end = span.end_byte;
    if (block.replace.empty() && end < lf_file.size() && lf_file[end] == '\n') ++end;

    std::string result = lf_file.substr(0, span.start_byte);
    result += block.replace;
    result += lf_file.substr(end);
    return eol == LineEnding::lf ? result : apply_line_ending(result, eol);
}

// Renders the located edit as one unified-diff hunk with up to `context`
// surrounding lines. '-' lines carry the file's lines verbatim; an identity
// edit yields the empty string.
inline std::string to_unified_diff(std::string_view file, const SriBlock& block,
                                   std::string_view path, int context = 3,
                                   const Marker& marker = Marker{},
                                   const ApplyOptions& options = {}) {
    const std::string lf_file = normalize_newlines(file);
    if (block.replace == block.search &&
        locate_anchor(lf_file, block.search, marker).status != AnchorStatus::not_found)
        return "";
    const auto span = detail::resolve_anchor(lf_file, block.search, marker, options);

    const LineIndex index(lf_file);
    const std::size_t span_first = span.start_line - 1;
    const std::size_t span_last = span.end_line - 1;

    std::vector<std::string_view> old_lines;
    for (std::size_t i = span_first; i <= span_last; ++i) old_lines.push_back(index.line(i));
    const auto new_lines = split_lines(block.replace);

    // Shrink to the differing core; identical affixes become context instead.
    std::size_t common_prefix = 0;
    while (common_prefix < old_lines.size() && common_prefix < new_lines.size() &&
           old_lines[common_prefix] == new_lines[common_prefix])
        ++common_prefix;
    std::size_t common_suffix = 0;
    while (common_suffix < old_lines.size() - common_prefix &&
           common_suffix < new_lines.size() - common_prefix &&
           old_lines[old_lines.size() - 1 - common_suffix] ==
               new_lines[new_lines.size() - 1 - common_suffix])
        ++common_suffix;

    const std::size_t core_old = old_lines.size() - common_prefix - common_suffix;
    const std::size_t core_new = new_lines.size() - common_prefix - common_suffix;
    if (core_old == 0 && core_new == 0) return "";

    const std::size_t n_old = index.line_count();
    const std::size_t change_begin = span_first + common_prefix;      // first changed old line
    const std::size_t change_end = span_last - common_suffix;         // last changed old line (if any)
    const std::size_t ctx = static_cast<std::size_t>(std::max(context, 0));

    const std::size_t ctx_before_begin = change_begin >= ctx ? change_begin - ctx : 0;
    const std::size_t ctx_before = change_begin - ctx_before_begin;
    const std::size_t after_begin = core_old == 0 ? change_begin : change_end + 1;
    const std::size_t ctx_after = std::min(ctx, n_old - after_begin);

    const std::size_t old_count = ctx_before + core_old + ctx_after;
    const std::size_t new_count = ctx_before + core_new + ctx_after;
    const std::size_t base = ctx_before_begin;  // 0-based first hunk line
    const std::size_t old_start = old_count ? base + 1 : base;
    const std::size_t new_start = new_count ? base + 1 : base;

    const bool no_final_newline = !lf_file.empty() && lf_file.back() != '\n';
    const std::size_t n_new = n_old - core_old + core_new;

    std::string out;
    out += "--- a/";
    out += path;
    out += "\n+++ b/";
    out += path;
    out += "\n@@ -";
    out += std::to_string(old_start);
    if (old_count != 1) out += "," + std::to_string(old_count);
    out += " +";
    out += std::to_string(new_start);
    if (new_count != 1) out += "," + std::to_string(new_count);
    out += " @@\n";

    const auto emit = [&out](char tag, std::string_view line, bool missing_newline) {
        out += tag;
        out += line;
        out += '\n';
        if (missing_newline) out += "\\ No newline at end of file\n";
    };

    for (std::size_t i = ctx_before_begin; i < change_begin; ++i)
        emit(' ', index.line(i), no_final_newline && i == n_old - 1);
    for (std::size_t i = 0; i < core_old; ++i) {
        const std::size_t line = change_begin + i;
        emit('-', index.line(line), no_final_newline && line == n_old - 1);
    }
    for (std::size_t i = 0; i < core_new; ++i) {
        const std::size_t new_line = base + ctx_before + i;
        emit('+', new_lines[common_prefix + i], no_final_newline && new_line == n_new - 1);
    }
    for (std::size_t i = after_begin; i < after_begin + ctx_after; ++i)
        emit(' ', index.line(i), no_final_newline && i == n_old - 1);

    return out;
}

}  // namespace sri
