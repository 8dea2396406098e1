#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <map>
#include <random>
#include <string>

#include <json.hpp>

#include "sri/extraction.hpp"

using namespace sri;

namespace {

std::string wrap(const std::string& search, const std::string& replace) {
    return "<<<<<<< SEARCH\n" + search + "\n=======\n" + replace + "\n>>>>>>> REPLACE";
}

nlohmann::json load_cases() {
    std::ifstream in(std::string(SRI_TEST_DATA_DIR) + "/fixtures/extraction_cases.json");
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("extract_replace_code matches the frozen differential fixtures") {
    const auto cases = load_cases();
    REQUIRE(cases.size() >= 500);
    std::map<ExtractionBranch, int> seen;
    for (const auto& c : cases) {
        const auto result = extract_replace_code(c["text"].get<std::string>());
        INFO("case: " << c["name"].get<std::string>());
        CHECK(result.middle == c["expected"].get<std::string>());
        ++seen[result.branch];
    }
    // The fixture set exercises every recovery branch.
    CHECK(seen.size() == 9);
}

TEST_CASE("extract_replace_code branch selection") {
    const Marker m;

    auto r = extract_replace_code(wrap("x = 1\n" + m.text + "\ny = 2", "x = 1\nz = x + 1\ny = 2"));
    CHECK(r.middle == "z = x + 1");
    CHECK(r.branch == ExtractionBranch::marker_general);

    r = extract_replace_code(wrap(m.text + "\nreturn x", "y = f()\nreturn x"));
    CHECK(r.middle == "y = f()");
    CHECK(r.branch == ExtractionBranch::marker_first_line);

    r = extract_replace_code(wrap("x = 1\n" + m.text, "x = 1\nz = 2"));
    CHECK(r.middle == "z = 2");
    CHECK(r.branch == ExtractionBranch::marker_last_line);

    r = extract_replace_code("=======\nraw capture\n>>>>>>> REPLACE");
    CHECK(r.middle == "raw capture");
    CHECK(r.branch == ExtractionBranch::no_search);

    r = extract_replace_code("<<<<<<< SEARCH\na\n=======\nb\n");
    CHECK(r.middle.empty());
    CHECK(r.branch == ExtractionBranch::no_replace);

    r = extract_replace_code(wrap("foo(a", "foo(a, b)"));
    CHECK(r.middle == ", b)");
    CHECK(r.branch == ExtractionBranch::inline_prefix);

    r = extract_replace_code(wrap("tail)", "head(tail)"));
    CHECK(r.middle == "head(");
    CHECK(r.branch == ExtractionBranch::inline_suffix);

    r = extract_replace_code(wrap("abc", "abXc"));
    CHECK(r.middle == "X");
    CHECK(r.branch == ExtractionBranch::inline_common);

    r = extract_replace_code(wrap("   ", "xyz"));
    CHECK(r.middle == "xyz");
    CHECK(r.branch == ExtractionBranch::fallback_full_replace);
}

TEST_CASE("no_search keeps the raw capture unstripped") {
    const auto r = extract_replace_code("=======\n  spaced  \n>>>>>>> REPLACE");
    CHECK(r.branch == ExtractionBranch::no_search);
    CHECK(r.middle == "  spaced  ");
}

TEST_CASE("extraction treats CRLF responses like LF ones") {
    const Marker m;
    const std::string lf = wrap("a\n" + m.text + "\nb", "a\nmid\nb");
    std::string crlf;
    for (char c : lf) {
        if (c == '\n') crlf += '\r';
        crlf += c;
    }
    CHECK(extract_replace_code(crlf) == extract_replace_code(lf));
}

TEST_CASE("diff_trim recovers insertions around echoed context") {
    CHECK(diff_trim("foo(a", "foo(a, b)") == ", b)");
    CHECK(diff_trim("abc", "abXc") == "X");
    CHECK(diff_trim("same", "same").empty());
    CHECK(diff_trim("", "whole").empty() == false);
    CHECK(diff_trim("", "whole") == "whole");
    CHECK(diff_trim("anything", "") == "");
    CHECK(diff_trim("zzz", "totally new") == "totally new");
}

TEST_CASE("diff_trim properties") {
    std::mt19937 rng(5);
    const auto word = [&rng] {
        std::string s;
        const int len = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < len; ++i) s += static_cast<char>('a' + rng() % 26);
        return s;
    };
    for (int n = 0; n < 300; ++n) {
        const auto s = word();
        const auto t = word();
        CHECK(diff_trim(s, s).empty());
        CHECK(diff_trim(s, s + t) == t);
        // The prefix branch is checked first, so the suffix identity only
        // applies when it does not also fire.
        if (!(t + s).starts_with(s)) CHECK(diff_trim(s, t + s) == t);
    }
}

namespace {

std::string random_code_chunk(std::mt19937& rng, int min_lines = 1, int max_lines = 4) {
    static const char* lines[] = {"total += item",   "if (x == y) {",  "}",
                                  "return result;",  "  count++;",     "for i in range(n):",
                                  "    emit(i)",     "value = f(a, b)", "x = 0"};
    const int n = min_lines + static_cast<int>(rng() % (max_lines - min_lines + 1));
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += '\n';
        out += lines[rng() % std::size(lines)];
    }
    return out;
}

}  // namespace

TEST_CASE("rendered ground truth blocks reconstruct the middle") {
    const Marker m;
    std::mt19937 rng(99);
    for (int n = 0; n < 300; ++n) {
        const auto before = random_code_chunk(rng);
        const auto middle = random_code_chunk(rng);
        const auto after = random_code_chunk(rng);
        const auto text = wrap(before + "\n" + m.text + "\n" + after,
                               before + "\n" + middle + "\n" + after);
        const auto result = extract_replace_code(text);
        INFO("before=" << before << "\nmiddle=" << middle << "\nafter=" << after);
        CHECK(result.branch == ExtractionBranch::marker_general);
        CHECK(result.middle == std::string(strip_newlines(middle)));
    }
}
