#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "sri/extraction.hpp"
#include "sri/format.hpp"
#include "sri/patching.hpp"
#include "sri/prompting.hpp"
#include "sri/records.hpp"
#include "sri/rng.hpp"
#include "sri/text.hpp"

// Turns a code corpus into SRI samples: block extraction, 2:1:1:1 category
// sampling weighted by repository stars, ground-truth SEARCH/REPLACE
// construction, and decontamination against a denylist.
//
// All synthesis happens in LF space: corpus content and task fields are
// newline-normalized on ingestion, so the round-trip guarantee
// apply_sri(marked_source, ground_truth) == source holds byte for byte on the
// normalized text. Mixed-EOL handling stays in the patching layer.

namespace sri {

enum class TaskCategory { function_body, logic_block, random_span, single_line };

inline constexpr std::array<TaskCategory, 4> kAllCategories = {
    TaskCategory::function_body, TaskCategory::logic_block,
    TaskCategory::random_span, TaskCategory::single_line};

inline std::string_view to_string(TaskCategory c) {
    switch (c) {
        case TaskCategory::function_body: return "function_body";
        case TaskCategory::logic_block: return "logic_block";
        case TaskCategory::random_span: return "random_span";
        case TaskCategory::single_line: return "single_line";
    }
    return "unknown";
}

inline TaskCategory task_category_from_string(std::string_view name) {
    for (const auto c : kAllCategories)
        if (name == to_string(c)) return c;
    throw std::invalid_argument("unknown task category: " + std::string(name));
}

// A candidate completion target: lines [start_line, end_line], 1-based
// inclusive. function_body spans cover the lines inside the braces or the
// indented suite; logic_block spans cover the whole construct including its
// header (and closing brace where the language has one).
struct BlockSpan {
    TaskCategory category = TaskCategory::random_span;
    std::size_t start_line = 1;
    std::size_t end_line = 1;
    std::string source_path;

    friend bool operator==(const BlockSpan&, const BlockSpan&) = default;
};

struct CorpusFile {
    std::string path;
    std::string content;
    std::string repo;
    long long stars = 0;
};

struct SriSample {
    CompletionTask task;
    std::string marked_source;
    SriBlock ground_truth;
    TaskCategory category = TaskCategory::random_span;
    std::string repo;
    long long stars = 0;

    friend bool operator==(const SriSample&, const SriSample&) = default;
};

// Sampling weights per category; (2,1,1,1) is the canonical distribution.
struct RatioSpec {
    int function_body = 2;
    int logic_block = 1;
    int random_span = 1;
    int single_line = 1;

    int weight(TaskCategory c) const {
        switch (c) {
            case TaskCategory::function_body: return function_body;
            case TaskCategory::logic_block: return logic_block;
            case TaskCategory::random_span: return random_span;
            case TaskCategory::single_line: return single_line;
        }
        return 0;
    }

    friend bool operator==(const RatioSpec&, const RatioSpec&) = default;
};

class UnsupportedLanguage : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientCorpus : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WindowOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Syntax providers

enum class LanguageFamily { braces, indent, unknown };

namespace detail {

// Lowercased extension (or bare name) of a hint that may be a path.
inline std::string language_key(std::string_view hint) {
    const auto slash = hint.find_last_of("/\\");
    std::string_view base = slash == std::string_view::npos ? hint : hint.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    if (dot != std::string_view::npos && dot + 1 < base.size()) base = base.substr(dot + 1);
    std::string key;
    key.reserve(base.size());
    for (const char c : base)
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return key;
}

}  // namespace detail

inline LanguageFamily classify_language(std::string_view hint) {
    static const std::unordered_set<std::string> indent = {"py", "pyw", "pyi", "python",
                                                           "python3"};
    static const std::unordered_set<std::string> braces = {
        "c",     "h",    "cc",   "cpp",  "cxx",        "hpp",   "hh",   "hxx", "c++",
        "java",  "js",   "jsx",  "mjs",  "cjs",        "ts",    "tsx",  "go",  "rs",
        "rust",  "cs",   "csharp", "kt", "kts",        "kotlin", "swift", "scala",
        "php",   "dart", "m",    "mm",   "javascript", "typescript", "groovy", "d",
        "zig"};
    const auto key = detail::language_key(hint);
    if (indent.count(key)) return LanguageFamily::indent;
    if (braces.count(key)) return LanguageFamily::braces;
    return LanguageFamily::unknown;
}

namespace detail {

inline std::string_view first_word(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() &&
           (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
    return s.substr(0, i);
}

inline bool is_logic_keyword(std::string_view w) {
    return w == "if" || w == "elif" || w == "else" || w == "for" || w == "foreach" ||
           w == "while" || w == "switch" || w == "do" || w == "try" || w == "catch" ||
           w == "except" || w == "finally" || w == "with" || w == "until";
}

inline bool is_non_function_opener(std::string_view w) {
    return w == "struct" || w == "class" || w == "enum" || w == "union" ||
           w == "namespace" || w == "interface" || w == "impl" || w == "trait" ||
           w == "object" || w == "type" || w == "module" || w == "extern";
}

// Per-line code with comments and string/char literal bodies removed, so the
// brace scanner is not fooled by braces in text. Strings are assumed to close
// on their own line; block comments may span lines.
inline std::vector<std::string> erase_comments_and_strings(
    const std::vector<std::string_view>& lines) {
    std::vector<std::string> out(lines.size());
    bool in_block = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = lines[i];
        std::string code;
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (in_block) {
                if (line[c] == '*' && c + 1 < line.size() && line[c + 1] == '/') {
                    in_block = false;
                    ++c;
                }
                continue;
            }
            const char ch = line[c];
            if (ch == '/' && c + 1 < line.size() && line[c + 1] == '/') break;
            if (ch == '/' && c + 1 < line.size() && line[c + 1] == '*') {
                in_block = true;
                ++c;
                continue;
            }
            if (ch == '"' || ch == '\'') {
                ++c;
                while (c < line.size() && line[c] != ch) {
                    if (line[c] == '\\') ++c;
                    ++c;
                }
                continue;
            }
            code.push_back(ch);
        }
        out[i] = code;
    }
    return out;
}

enum class BraceKind { other, function, logic };

inline BraceKind classify_brace_header(std::string_view header) {
    while (header.starts_with("}")) header = lstrip(header.substr(1));
    const auto word = first_word(header);
    if (is_logic_keyword(word)) return BraceKind::logic;
    if (!is_non_function_opener(word) && header.find('(') != std::string_view::npos &&
        header.find(')') != std::string_view::npos && !header.ends_with("=") &&
        !header.ends_with(","))
        return BraceKind::function;
    return BraceKind::other;
}

inline std::vector<BlockSpan> scan_braces(std::string_view source, std::string_view path) {
    const auto raw_lines = split_lines(source);
    const auto lines = erase_comments_and_strings(raw_lines);

    struct Open {
        std::size_t header_line;
        std::size_t open_line;
        BraceKind kind;
    };
    std::vector<Open> stack;
    std::vector<BlockSpan> out;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (line[c] == '{') {
                std::string_view header = strip(std::string_view(line).substr(0, c));
                std::size_t header_line = i;
                if (header.empty() || header == "}") {
                    // Brace on its own line: the construct header sits above.
                    for (std::size_t b = i; b-- > 0;) {
                        if (is_blank(lines[b])) continue;
                        header = strip(lines[b]);
                        header_line = b;
                        break;
                    }
                }
                stack.push_back({header_line, i, classify_brace_header(header)});
            } else if (line[c] == '}') {
                if (stack.empty()) continue;
                const Open open = stack.back();
                stack.pop_back();
                if (open.kind == BraceKind::function && i >= open.open_line + 2)
                    out.push_back({TaskCategory::function_body, open.open_line + 2, i,
                                   std::string(path)});
                else if (open.kind == BraceKind::logic)
                    out.push_back({TaskCategory::logic_block, open.header_line + 1, i + 1,
                                   std::string(path)});
            }
        }
    }
    return out;
}

inline std::size_t indent_width(std::string_view line) {
    std::size_t w = 0;
    for (const char c : indentation_of(line)) w += c == '\t' ? 8 - w % 8 : 1;
    return w;
}

inline std::vector<BlockSpan> scan_indent(std::string_view source, std::string_view path) {
    const auto lines = split_lines(source);
    std::vector<BlockSpan> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto s = strip(lines[i]);
        if (s.empty() || s.starts_with("#")) continue;
        auto word = first_word(s);
        if (word == "async") word = first_word(lstrip(s.substr(word.size())));
        const bool fn = word == "def";
        if ((!fn && !is_logic_keyword(word)) || s.find(':') == std::string_view::npos)
            continue;

        const auto head = indent_width(lines[i]);
        std::size_t first = i + 1, last = i;
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (is_blank(lines[j])) continue;
            if (indent_width(lines[j]) <= head) break;
            if (last < first) first = j;
            last = j;
        }
        if (fn) {
            if (last >= first)
                out.push_back({TaskCategory::function_body, first + 1, last + 1,
                               std::string(path)});
        } else {
            out.push_back({TaskCategory::logic_block, i + 1, last + 1, std::string(path)});
        }
    }
    return out;
}

}  // namespace detail

// Reports function_body and logic_block spans for a source file. Implemented
// so grammar-backed parsers can be plugged in; the built-in provider uses
// brace matching and indentation suites and needs no native grammars.
class SyntaxProvider {
public:
    virtual ~SyntaxProvider() = default;
    virtual bool supports(std::string_view language_hint) const = 0;
    // Throws UnsupportedLanguage when the language is unknown and no structure
    // is recognizable either way.
    virtual std::vector<BlockSpan> structured_blocks(std::string_view source,
                                                     std::string_view language_hint,
                                                     std::string_view path) const = 0;
};

class HeuristicSyntaxProvider final : public SyntaxProvider {
public:
    bool supports(std::string_view language_hint) const override {
        return classify_language(language_hint) != LanguageFamily::unknown;
    }

    std::vector<BlockSpan> structured_blocks(std::string_view source,
                                             std::string_view language_hint,
                                             std::string_view path) const override {
        switch (classify_language(language_hint)) {
            case LanguageFamily::braces: return detail::scan_braces(source, path);
            case LanguageFamily::indent: return detail::scan_indent(source, path);
            case LanguageFamily::unknown: break;
        }
        // Unknown language: both heuristics are language-agnostic enough to try.
        auto spans = detail::scan_braces(source, path);
        if (spans.empty()) spans = detail::scan_indent(source, path);
        if (spans.empty())
            throw UnsupportedLanguage("no recognizable structure for language hint '" +
                                      std::string(language_hint) + "'");
        return spans;
    }
};

inline const SyntaxProvider& heuristic_syntax_provider() {
    static const HeuristicSyntaxProvider provider;
    return provider;
}

// Every candidate span in the file: provider-reported function bodies and
// logic blocks, each nonblank single line, and all contiguous spans of up to
// `limit` lines. Spans covering the whole file are excluded. An unknown
// language without recognizable structure degrades to the random_span and
// single_line categories instead of failing.
inline std::vector<BlockSpan> extract_blocks(
    std::string_view source, std::string_view language_hint, std::string_view path = {},
    RegionLimit limit = RegionLimit{},
    const SyntaxProvider& provider = heuristic_syntax_provider()) {
    std::vector<BlockSpan> out;
    if (source.empty()) return out;

    try {
        out = provider.structured_blocks(source, language_hint, path);
    } catch (const UnsupportedLanguage&) {
    }

    const auto lines = split_lines(source);
    const std::size_t n = lines.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!is_blank(lines[i]))
            out.push_back({TaskCategory::single_line, i + 1, i + 1, std::string(path)});

    const auto max_len =
        std::min<std::size_t>(static_cast<std::size_t>(limit.lines_each_side()),
                              n > 0 ? n - 1 : 0);
    for (std::size_t len = 1; len <= max_len; ++len)
        for (std::size_t start = 0; start + len <= n; ++start)
            out.push_back({TaskCategory::random_span, start + 1, start + len,
                           std::string(path)});

    std::erase_if(out, [n](const BlockSpan& b) {
        return b.start_line == 1 && b.end_line == n;
    });
    std::sort(out.begin(), out.end(), [](const BlockSpan& a, const BlockSpan& b) {
        return std::tie(a.start_line, a.end_line, a.category) <
               std::tie(b.start_line, b.end_line, b.category);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Ground-truth construction

namespace detail {

inline CompletionTask normalized_task(const CompletionTask& task) {
    CompletionTask t = task;
    t.prefix = normalize_newlines(t.prefix);
    t.middle = normalize_newlines(t.middle);
    t.suffix = normalize_newlines(t.suffix);
    t.crossfile_context = normalize_newlines(t.crossfile_context);
    return t;
}

}  // namespace detail

struct SampleMeta {
    TaskCategory category = TaskCategory::random_span;
    std::string repo;
    long long stars = 0;
};

// Builds the marked source and its ground-truth edit block. The search
// section is the marker line plus up to `limit` lines of context each side,
// sliced out of the marked source; the replace section is the corresponding
// window of the original source, so applying the block reproduces the
// original byte for byte. The one exception is a task with an empty suffix
// whose middle lacks a final newline: the marker line's own newline survives
// application, and sampling skips such spans.
//
// `max_middle_lines` bounds the middle; 0 means the default of twice the
// window limit.
inline SriSample make_sri_sample(const CompletionTask& task,
                                 RegionLimit limit = RegionLimit{},
                                 const Marker& marker = Marker{},
                                 const SampleMeta& meta = {},
                                 std::size_t max_middle_lines = 0) {
    if (task.middle.empty())
        throw std::invalid_argument("make_sri_sample: task.middle must be nonempty");

    const CompletionTask t = detail::normalized_task(task);
    const std::size_t m = split_lines(t.middle).size();
    const std::size_t max_middle =
        max_middle_lines ? max_middle_lines
                         : 2 * static_cast<std::size_t>(limit.lines_each_side());
    if (m > max_middle)
        throw WindowOverflow("middle spans " + std::to_string(m) +
                             " lines, over the cap of " + std::to_string(max_middle));

    const std::string marked = insert_marker(t, marker);
    const LineIndex marked_index(marked);
    const std::size_t prefix_lines = split_lines(t.prefix).size();
    const auto window = static_cast<std::size_t>(limit.lines_each_side());
    const std::size_t above = std::min(window, prefix_lines);
    const std::size_t below =
        std::min(window, marked_index.line_count() - 1 - prefix_lines);

    const std::string original = t.prefix + t.middle + t.suffix;
    const LineIndex original_index(original);

    // A prefix that stops mid-line shares its last line with the middle, and a
    // middle without a final newline shares its last line with the suffix;
    // both merges shift the original window end left by one line.
    const bool prefix_merged = !t.prefix.empty() && t.prefix.back() != '\n';
    const bool suffix_merged = !t.suffix.empty() && t.middle.back() != '\n';
    const std::size_t mid_last = prefix_lines - (prefix_merged ? 1 : 0) + m - 1;
    const std::size_t first = prefix_lines - above;
    const std::size_t last =
        std::min(mid_last + below - (suffix_merged && below > 0 ? 1 : 0),
                 original_index.line_count() - 1);

    SriSample sample;
    sample.task = t;
    sample.marked_source = marked;
    sample.ground_truth.search =
        std::string(marked_index.slice(prefix_lines - above, prefix_lines + below));
    sample.ground_truth.replace = std::string(original_index.slice(first, last));
    sample.ground_truth.fenced = true;
    sample.category = meta.category;
    sample.repo = meta.repo;
    sample.stars = meta.stars;
    return sample;
}

// ---------------------------------------------------------------------------
// Corpus sampling

// Largest-remainder split of `count` over the four categories. Ties go to the
// earlier category in declaration order.
inline std::array<std::size_t, 4> ratio_quotas(const RatioSpec& ratio, std::size_t count) {
    std::array<unsigned long long, 4> w{};
    unsigned long long total = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const int v = ratio.weight(kAllCategories[i]);
        if (v < 0) throw std::invalid_argument("ratio weights must be non-negative");
        w[i] = static_cast<unsigned long long>(v);
        total += w[i];
    }
    if (total == 0) throw std::invalid_argument("ratio needs at least one positive weight");

    std::array<std::size_t, 4> quota{};
    std::array<unsigned long long, 4> remainder{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const unsigned long long scaled = static_cast<unsigned long long>(count) * w[i];
        quota[i] = static_cast<std::size_t>(scaled / total);
        remainder[i] = scaled % total;
        assigned += quota[i];
    }

    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(remainder[b], a) < std::tie(remainder[a], b);
    });
    for (std::size_t k = 0; k < count - assigned; ++k) ++quota[order[k]];
    return quota;
}

namespace detail {

struct FilePrep {
    const CorpusFile* file = nullptr;
    std::string content;  // newline-normalized
    std::vector<BlockSpan> functions;
    std::vector<BlockSpan> logics;
    std::vector<std::size_t> singles;  // 0-based line numbers
    std::size_t lines = 0;
    bool final_newline = false;
    std::uint64_t weight = 1;
};

inline CompletionTask task_from_lines(const FilePrep& prep, std::size_t first,
                                      std::size_t last) {
    const LineIndex index(prep.content);
    const std::size_t begin = index.line_start(first);
    const std::size_t end =
        last + 1 < index.line_count() ? index.line_start(last + 1) : prep.content.size();
    CompletionTask task;
    task.prefix = prep.content.substr(0, begin);
    task.middle = prep.content.substr(begin, end - begin);
    task.suffix = prep.content.substr(end);
    task.path = prep.file->path;
    return task;
}

// The ground truth must survive its own machinery before a sample is emitted:
// application restores the source exactly, extraction recovers the middle
// (up to whitespace stripping, the exact-match convention, since the marker
// line carries the middle's indentation), and the region validator accepts
// the window. Failures are resampled.
inline bool sample_self_check(const SriSample& sample, const std::string& source,
                              const Marker& marker, RegionLimit limit) {
    try {
        if (apply_sri(sample.marked_source, sample.ground_truth, marker) != source)
            return false;
    } catch (const anchor_error&) {
        return false;
    }
    if (!validate_region(sample.ground_truth, marker, limit).ok()) return false;
    const auto recovered =
        extract_replace_code(render_sri_block(sample.ground_truth), marker);
    return strip(recovered.middle) == strip(sample.task.middle);
}

}  // namespace detail

// Draws `count` samples from the corpus: categories split by largest
// remainder over the ratio, files picked with probability proportional to
// stars+1, spans picked uniformly within the chosen file (random spans pick a
// uniform length in 1..limit first). Middles are never content-filtered;
// a sample is only rejected when its ground truth fails the structural
// self-check or overflows the window. Output is canonically ordered by
// (repo, path, span, category) and task ids are assigned after ordering, so
// results depend only on (corpus, ratio, count, seed).
inline std::vector<SriSample> sample_tasks(
    const std::vector<CorpusFile>& corpus, const RatioSpec& ratio, std::size_t count,
    std::uint64_t seed, RegionLimit limit = RegionLimit{}, const Marker& marker = Marker{},
    const SyntaxProvider& provider = heuristic_syntax_provider()) {
    if (corpus.empty()) throw InsufficientCorpus("corpus is empty");
    if (count == 0) throw std::invalid_argument("count must be at least 1");

    const auto window = static_cast<std::size_t>(limit.lines_each_side());
    const std::size_t max_middle = 2 * window;

    std::vector<detail::FilePrep> preps;
    preps.reserve(corpus.size());
    for (const auto& file : corpus) {
        detail::FilePrep prep;
        prep.file = &file;
        prep.content = normalize_newlines(file.content);
        if (prep.content.empty()) continue;
        prep.lines = LineIndex(prep.content).line_count();
        prep.final_newline = prep.content.back() == '\n';
        prep.weight = file.stars < 0 ? 1 : static_cast<std::uint64_t>(file.stars) + 1;

        // Spans ending on a final line that lacks a newline cannot round-trip
        // (the marker line's newline would survive application), so they are
        // not candidates; neither are whole-file spans or overlong middles.
        const auto usable = [&](std::size_t first, std::size_t last) {
            if (first == 0 && last + 1 == prep.lines) return false;
            if (!prep.final_newline && last + 1 == prep.lines) return false;
            return last - first + 1 <= max_middle;
        };

        std::vector<BlockSpan> structured;
        try {
            structured = provider.structured_blocks(prep.content, file.path, file.path);
        } catch (const UnsupportedLanguage&) {
        }
        for (const auto& span : structured) {
            if (!usable(span.start_line - 1, span.end_line - 1)) continue;
            (span.category == TaskCategory::function_body ? prep.functions : prep.logics)
                .push_back(span);
        }

        const auto lines = split_lines(prep.content);
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (!is_blank(lines[i]) && usable(i, i)) prep.singles.push_back(i);

        preps.push_back(std::move(prep));
    }

    // Per-category eligible files with cumulative star weights.
    struct Pool {
        std::vector<std::size_t> files;
        std::vector<std::uint64_t> cumulative;
        std::uint64_t total = 0;
    };
    std::array<Pool, 4> pools;
    for (std::size_t f = 0; f < preps.size(); ++f) {
        const auto& prep = preps[f];
        const std::array<bool, 4> eligible = {
            !prep.functions.empty(), !prep.logics.empty(), prep.lines >= 2,
            !prep.singles.empty()};
        for (std::size_t c = 0; c < 4; ++c) {
            if (!eligible[c]) continue;
            pools[c].files.push_back(f);
            pools[c].total += prep.weight;
            pools[c].cumulative.push_back(pools[c].total);
        }
    }

    const auto quotas = ratio_quotas(ratio, count);
    std::mt19937_64 rng(seed);
    std::vector<SriSample> samples;
    samples.reserve(count);

    for (std::size_t c = 0; c < 4; ++c) {
        if (quotas[c] == 0) continue;
        const TaskCategory category = kAllCategories[c];
        const Pool& pool = pools[c];
        if (pool.files.empty())
            throw InsufficientCorpus("corpus has no " +
                                     std::string(to_string(category)) + " candidates");

        std::size_t attempts = quotas[c] * 100 + 100;
        for (std::size_t produced = 0; produced < quotas[c];) {
            if (attempts-- == 0)
                throw InsufficientCorpus("could not satisfy " +
                                         std::string(to_string(category)) +
                                         " quota; corpus candidates keep failing the "
                                         "round-trip self-check");

            const auto r = detail::bounded_random(rng, pool.total);
            const auto it =
                std::upper_bound(pool.cumulative.begin(), pool.cumulative.end(), r);
            const auto& prep =
                preps[pool.files[static_cast<std::size_t>(it - pool.cumulative.begin())]];

            std::size_t first = 0, last = 0;
            switch (category) {
                case TaskCategory::function_body:
                case TaskCategory::logic_block: {
                    const auto& spans = category == TaskCategory::function_body
                                            ? prep.functions
                                            : prep.logics;
                    const auto& span =
                        spans[detail::bounded_random(rng, spans.size())];
                    first = span.start_line - 1;
                    last = span.end_line - 1;
                    break;
                }
                case TaskCategory::random_span: {
                    const auto max_len = std::min(window, prep.lines - 1);
                    const auto len = 1 + detail::bounded_random(rng, max_len);
                    const auto max_start =
                        prep.lines - len - (prep.final_newline ? 0 : 1);
                    first = detail::bounded_random(rng, max_start + 1);
                    last = first + len - 1;
                    break;
                }
                case TaskCategory::single_line:
                    first = last =
                        prep.singles[detail::bounded_random(rng, prep.singles.size())];
                    break;
            }

            auto task = detail::task_from_lines(prep, first, last);
            SriSample sample;
            try {
                sample = make_sri_sample(task, limit, marker,
                                         {category, prep.file->repo, prep.file->stars});
            } catch (const WindowOverflow&) {
                continue;
            }
            if (!detail::sample_self_check(sample, prep.content, marker, limit)) continue;
            samples.push_back(std::move(sample));
            ++produced;
        }
    }

    // Canonical order plus deterministic ids; duplicates (sampling is with
    // replacement) get a #n suffix so ids stay unique.
    const auto span_of = [](const SriSample& s) {
        const auto start = split_lines(s.task.prefix).size() + 1;
        return std::pair(start, start + split_lines(s.task.middle).size() - 1);
    };
    std::sort(samples.begin(), samples.end(),
              [&](const SriSample& a, const SriSample& b) {
                  const auto sa = span_of(a), sb = span_of(b);
                  return std::tie(a.repo, a.task.path, sa.first, sa.second, a.category) <
                         std::tie(b.repo, b.task.path, sb.first, sb.second, b.category);
              });
    std::map<std::string, std::size_t> seen;
    for (auto& sample : samples) {
        const auto span = span_of(sample);
        std::string id = sample.repo + ":" + sample.task.path + ":" +
                         std::to_string(span.first) + "-" + std::to_string(span.second) +
                         ":" + std::string(to_string(sample.category));
        const auto n = ++seen[id];
        if (n > 1) id += "#" + std::to_string(n);
        sample.task.task_id = std::move(id);
    }
    return samples;
}

// ---------------------------------------------------------------------------
// Decontamination

inline constexpr std::size_t kFingerprintGram = 7;

namespace detail {

// Identifier-ish runs plus single punctuation characters; whitespace only
// separates, so formatting variants fingerprint identically.
inline std::vector<std::string_view> normalized_tokens(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    const auto wordish = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (i < text.size()) {
        const char c = text[i];
        if (is_blank(text.substr(i, 1))) {
            ++i;
            continue;
        }
        if (wordish(c)) {
            std::size_t j = i;
            while (j < text.size() && wordish(text[j])) ++j;
            tokens.push_back(text.substr(i, j - i));
            i = j;
        } else {
            tokens.push_back(text.substr(i, 1));
            ++i;
        }
    }
    return tokens;
}

inline std::uint64_t fnv1a(std::string_view data, std::uint64_t hash) {
    for (const char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

}  // namespace detail

// Hashes of the text's normalized token 7-grams; shorter texts yield one
// hash over all their tokens so they remain comparable.
inline std::vector<std::uint64_t> content_fingerprints(std::string_view text) {
    const auto tokens = detail::normalized_tokens(text);
    std::vector<std::uint64_t> out;
    if (tokens.empty()) return out;

    const auto hash_window = [&](std::size_t begin, std::size_t n) {
        std::uint64_t h = 14695981039346656037ULL;
        for (std::size_t k = 0; k < n; ++k) {
            h = detail::fnv1a(tokens[begin + k], h);
            h = detail::fnv1a("\x1f", h);
        }
        return h;
    };

    if (tokens.size() < kFingerprintGram) {
        out.push_back(hash_window(0, tokens.size()));
        return out;
    }
    for (std::size_t i = 0; i + kFingerprintGram <= tokens.size(); ++i)
        out.push_back(hash_window(i, kFingerprintGram));
    return out;
}

struct Denylist {
    std::unordered_set<std::string> repos;
    std::unordered_set<std::uint64_t> fingerprints;

    void add_snippet(std::string_view text) {
        for (const auto h : content_fingerprints(text)) fingerprints.insert(h);
    }
};

struct DecontaminationReport {
    std::vector<SriSample> kept;
    std::size_t dropped_by_repo = 0;
    std::size_t dropped_by_fingerprint = 0;
};

// Drops samples from denylisted repositories, then samples whose middle
// shares any normalized 7-gram with a denylisted snippet.
inline DecontaminationReport decontaminate(std::vector<SriSample> samples,
                                           const Denylist& denylist) {
    DecontaminationReport report;
    report.kept.reserve(samples.size());
    for (auto& sample : samples) {
        if (denylist.repos.count(sample.repo)) {
            ++report.dropped_by_repo;
            continue;
        }
        bool contaminated = false;
        if (!denylist.fingerprints.empty()) {
            for (const auto h : content_fingerprints(sample.task.middle)) {
                if (denylist.fingerprints.count(h)) {
                    contaminated = true;
                    break;
                }
            }
        }
        if (contaminated) {
            ++report.dropped_by_fingerprint;
            continue;
        }
        report.kept.push_back(std::move(sample));
    }
    return report;
}

}  // namespace sri
