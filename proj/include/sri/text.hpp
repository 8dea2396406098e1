#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared across the library. The strip/split family
// follows Python semantics (whitespace set, clamping slices, separator
// handling) because the SRI extraction rules are defined in those terms.

namespace sri {

// Matches Python str.strip() for ASCII input: space, \t, \n, \r, \f, \v.
inline constexpr std::string_view kWhitespace = " \t\n\r\f\v";

inline std::string_view lstrip(std::string_view s, std::string_view chars = kWhitespace) {
    const auto pos = s.find_first_not_of(chars);
    return pos == std::string_view::npos ? std::string_view{} : s.substr(pos);
}

inline std::string_view rstrip(std::string_view s, std::string_view chars = kWhitespace) {
    const auto pos = s.find_last_not_of(chars);
    return pos == std::string_view::npos ? std::string_view{} : s.substr(0, pos + 1);
}

inline std::string_view strip(std::string_view s, std::string_view chars = kWhitespace) {
    return rstrip(lstrip(s, chars), chars);
}

inline std::string strip_copy(std::string_view s, std::string_view chars = kWhitespace) {
    return std::string(strip(s, chars));
}

// Newline-only variants, i.e. Python's strip("\n").
inline std::string_view strip_newlines(std::string_view s) { return strip(s, "\n"); }
inline std::string_view lstrip_newlines(std::string_view s) { return lstrip(s, "\n"); }
inline std::string_view rstrip_newlines(std::string_view s) { return rstrip(s, "\n"); }

inline bool is_blank(std::string_view s) {
    return s.find_first_not_of(kWhitespace) == std::string_view::npos;
}

// Leading spaces/tabs of a line.
inline std::string_view indentation_of(std::string_view line) {
    const auto pos = line.find_first_not_of(" \t");
    return pos == std::string_view::npos ? line : line.substr(0, pos);
}

// Python s.split(sep): keeps empty fields, including a trailing one, so
// join(split(s)) == s.
inline std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto hit = s.find(sep, pos);
        if (hit == std::string_view::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, hit - pos));
        pos = hit + sep.size();
    }
    return out;
}

// Python s.splitlines() restricted to \n: a trailing newline does not add an
// empty final line, and "" has no lines.
inline std::vector<std::string_view> split_lines(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto hit = s.find('\n', pos);
        if (hit == std::string_view::npos) hit = s.size();
        out.push_back(s.substr(pos, hit - pos));
        pos = hit + 1;
    }
    return out;
}

inline std::string join_lines(const std::vector<std::string_view>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out.push_back('\n');
        out.append(lines[i]);
    }
    return out;
}

inline std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out.push_back('\n');
        out.append(lines[i]);
    }
    return out;
}

// Byte offsets of every line start plus a final sentinel at size(). Lines are
// numbered from zero; offsets address the backing string.
class LineIndex {
public:
    explicit LineIndex(std::string_view text) : text_(text) {
        starts_.push_back(0);
        for (std::size_t i = 0; i < text.size(); ++i)
            if (text[i] == '\n') starts_.push_back(i + 1);
        // A trailing newline does not open a new line.
        if (starts_.size() > 1 && starts_.back() == text.size()) starts_.pop_back();
        starts_.push_back(text.size());
    }

    std::size_t line_count() const { return starts_.size() - 1; }
    std::size_t line_start(std::size_t line) const { return starts_[line]; }

    // End of the line's content, excluding its newline.
    std::size_t line_end(std::size_t line) const {
        std::size_t end = starts_[line + 1];
        if (end > starts_[line] && text_[end - 1] == '\n') --end;
        return end;
    }

    std::string_view line(std::size_t i) const {
        return text_.substr(line_start(i), line_end(i) - line_start(i));
    }

    // Bytes spanning lines [first, last] without the trailing newline.
    std::string_view slice(std::size_t first, std::size_t last) const {
        return text_.substr(line_start(first), line_end(last) - line_start(first));
    }

private:
    std::string_view text_;
    std::vector<std::size_t> starts_;
};

enum class LineEnding { lf, crlf };

// Dominant line-ending style; LF wins ties and applies to single-line text.
inline LineEnding detect_line_ending(std::string_view text) {
    std::size_t crlf = 0, lf = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '\n') continue;
        if (i > 0 && text[i - 1] == '\r') ++crlf; else ++lf;
    }
    return crlf > lf ? LineEnding::crlf : LineEnding::lf;
}

inline std::string normalize_newlines(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
        out.push_back(text[i]);
    }
    return out;
}

inline std::string apply_line_ending(std::string_view text, LineEnding eol) {
    if (eol == LineEnding::lf) return std::string(text);
    std::string out;
    out.reserve(text.size() + text.size() / 16);
    for (char c : text) {
        if (c == '\n') out.push_back('\r');
        out.push_back(c);
    }
    return out;
}

}  // namespace sri
