#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sri/text.hpp"

// The SRI wire format: one infill marker plus SEARCH/REPLACE edit blocks.
//
//   <<<<<<< SEARCH
//   ...code containing the marker...
//   =======
//   ...same code with the middle filled in...
//   >>>>>>> REPLACE
//
// Delimiters are tolerant: two or more '<' / '>' and three or more '=', with
// optional whitespace between the run and the SEARCH/REPLACE keyword. The
// grammar in the matchers below is shared by parsing and extraction so both
// accept exactly the same blocks.

namespace sri {

inline constexpr std::string_view kMiddleMarkerText = "/* MIDDLE CODE TO COMPLETE */";

struct Marker {
    std::string text = std::string(kMiddleMarkerText);
};

// Editable window: this many lines on each side of the marker line.
class RegionLimit {
public:
    RegionLimit() = default;
    explicit RegionLimit(int lines_each_side) : lines_(lines_each_side) {
        if (lines_ < 1 || lines_ > 1000)
            throw std::out_of_range("RegionLimit: lines_each_side must be in [1, 1000]");
    }
    int lines_each_side() const { return lines_; }

private:
    int lines_ = 10;
};

struct SriBlock {
    std::string search;   // raw text between the SEARCH header and the separator
    std::string replace;  // raw text between the separator and the REPLACE footer
    bool fenced = false;  // wrapped in a ```replace code fence

    friend bool operator==(const SriBlock&, const SriBlock&) = default;
};

namespace detail {

inline bool is_py_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::size_t skip_spaces(std::string_view text, std::size_t pos) {
    while (pos < text.size() && is_py_space(text[pos])) ++pos;
    return pos;
}

inline std::size_t skip_run(std::string_view text, std::size_t pos, char c) {
    while (pos < text.size() && text[pos] == c) ++pos;
    return pos;
}

struct Capture {
    std::size_t header_begin = 0;  // offset of the delimiter run
    std::size_t begin = 0;         // capture start
    std::size_t end = 0;           // capture end (exclusive)
};

// Leftmost match of `<{2,}\s*SEARCH\n(.*?)\n\s*={3,}` with '.' spanning
// newlines and the lazy capture taking the shortest text. Delimiter runs are
// scanned maximally, which the pattern forces anyway: a shorter run would
// leave a character no other piece can consume.
inline std::optional<Capture> match_search_section(std::string_view text) {
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
        if (text[pos] != '<') continue;
        const std::size_t run_begin = pos;
        const std::size_t run_end = skip_run(text, pos, '<');
        pos = run_end - 1;  // resume after this run on failure
        if (run_end - run_begin < 2) continue;
        std::size_t p = skip_spaces(text, run_end);
        if (text.compare(p, 7, "SEARCH\n") != 0) continue;
        const std::size_t capture_begin = p + 7;
        for (std::size_t nl = capture_begin; nl < text.size(); ++nl) {
            if (text[nl] != '\n') continue;
            const std::size_t q = skip_spaces(text, nl + 1);
            if (text.compare(q, 3, "===") == 0)
                return Capture{run_begin, capture_begin, nl};
        }
    }
    return std::nullopt;
}

// Leftmost match of `={3,}\n(.*?)\n\s*>{2,}\s*REPLACE`.
inline std::optional<Capture> match_replace_section(std::string_view text) {
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
        if (text[pos] != '=') continue;
        const std::size_t run_begin = pos;
        const std::size_t run_end = skip_run(text, pos, '=');
        pos = run_end - 1;
        if (run_end - run_begin < 3) continue;
        if (run_end >= text.size() || text[run_end] != '\n') continue;
        const std::size_t capture_begin = run_end + 1;
        for (std::size_t nl = capture_begin; nl < text.size(); ++nl) {
            if (text[nl] != '\n') continue;
            std::size_t q = skip_spaces(text, nl + 1);
            const std::size_t gt_end = skip_run(text, q, '>');
            if (gt_end - q < 2) continue;
            q = skip_spaces(text, gt_end);
            if (text.compare(q, 7, "REPLACE") == 0)
                return Capture{run_begin, capture_begin, nl};
        }
    }
    return std::nullopt;
}

// True when a ```replace fence line opens before `before_offset`.
inline bool has_replace_fence_before(std::string_view text, std::size_t before_offset) {
    std::size_t pos = 0;
    while (pos < before_offset) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        if (strip(text.substr(pos, eol - pos)) == "```replace") return true;
        pos = eol + 1;
    }
    return false;
}

}  // namespace detail

// Parses the first SEARCH/REPLACE block out of a model response. Model output
// arrives with platform line endings, so CRLF is normalized away up front.
// A missing replace section makes the response unusable and yields nullopt;
// a missing search section is legal (replace-only block) and parses with an
// empty search.
inline std::optional<SriBlock> parse_sri_block(std::string_view text) {
    const std::string normalized = normalize_newlines(text);
    const auto replace = detail::match_replace_section(normalized);
    if (!replace) return std::nullopt;
    const auto search = detail::match_search_section(normalized);

    SriBlock block;
    block.replace = normalized.substr(replace->begin, replace->end - replace->begin);
    std::size_t first_offset = replace->header_begin;
    if (search) {
        block.search = normalized.substr(search->begin, search->end - search->begin);
        first_offset = std::min(first_offset, search->header_begin);
    }
    block.fenced = detail::has_replace_fence_before(normalized, first_offset);
    return block;
}

// Canonical rendering with seven-character delimiters.
inline std::string render_sri_block(const SriBlock& block) {
    std::string out;
    out.reserve(block.search.size() + block.replace.size() + 64);
    if (block.fenced) out += "```replace\n";
    out += "<<<<<<< SEARCH\n";
    out += block.search;
    out += "\n=======\n";
    out += block.replace;
    out += "\n>>>>>>> REPLACE";
    if (block.fenced) out += "\n```";
    out += "\n";
    return out;
}

struct RegionReport {
    bool marker_present = false;      // search section contains the marker
    bool within_window = false;       // search spans <= limit lines each side of it
    bool replace_marker_free = false; // replace no longer carries the marker

    bool ok() const { return marker_present && within_window && replace_marker_free; }

    friend bool operator==(const RegionReport&, const RegionReport&) = default;
};

// Checks that an edit honors the editable-region contract: the search section
// anchors on the marker, stays within the allowed window, and the replacement
// actually resolves the marker.
inline RegionReport validate_region(const SriBlock& block, const Marker& marker,
                                    RegionLimit limit = RegionLimit{}) {
    RegionReport report;
    report.replace_marker_free = block.replace.find(marker.text) == std::string::npos;

    const auto lines = split_lines(block.search);
    std::size_t marker_line = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].find(marker.text) != std::string_view::npos) {
            marker_line = i;
            break;
        }
    }
    if (marker_line == lines.size()) return report;  // no marker: nothing to window against

    report.marker_present = true;
    const auto above = static_cast<int>(marker_line);
    const auto below = static_cast<int>(lines.size() - 1 - marker_line);
    report.within_window =
        above <= limit.lines_each_side() && below <= limit.lines_each_side();
    return report;
}

}  // namespace sri
