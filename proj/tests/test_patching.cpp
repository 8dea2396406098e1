#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "sri/patching.hpp"

using namespace sri;

namespace {

const std::string kFile =
    "#include <cstdio>\n"
    "\n"
    "int add(int a, int b) {\n"
    "    return a + b;\n"
    "}\n"
    "\n"
    "int main() {\n"
    "    printf(\"%d\\n\", add(1, 2));\n"
    "    return 0;\n"
    "}\n";

}  // namespace

TEST_CASE("locate_anchor finds a unique block") {
    const auto outcome = locate_anchor(kFile, "int add(int a, int b) {\n    return a + b;\n}");
    REQUIRE(outcome.status == AnchorStatus::ok);
    REQUIRE(outcome.span.has_value());
    CHECK(outcome.span->start_line == 3);
    CHECK(outcome.span->end_line == 5);
    CHECK(outcome.span->occurrence_count == 1);
    CHECK(kFile.substr(outcome.span->start_byte,
                       outcome.span->end_byte - outcome.span->start_byte) ==
          "int add(int a, int b) {\n    return a + b;\n}");
}

TEST_CASE("locate_anchor ignores trailing whitespace differences") {
    const auto outcome = locate_anchor(kFile, "int add(int a, int b) {   \n    return a + b;\t\n}");
    REQUIRE(outcome.status == AnchorStatus::ok);
    CHECK(outcome.span->start_line == 3);
}

TEST_CASE("locate_anchor keeps leading whitespace significant") {
    const auto outcome = locate_anchor(kFile, "return a + b;");
    CHECK(outcome.status == AnchorStatus::not_found);
    CHECK(locate_anchor(kFile, "    return a + b;").status == AnchorStatus::ok);
}

TEST_CASE("locate_anchor reports every occurrence of a repeated block") {
    const std::string file = "a\nb\na\nb\nc\n";
    const auto outcome = locate_anchor(file, "a\nb");
    CHECK(outcome.status == AnchorStatus::ambiguous);
    CHECK_FALSE(outcome.span.has_value());
    REQUIRE(outcome.candidates.size() == 2);
    CHECK(outcome.candidates[0].start_line == 1);
    CHECK(outcome.candidates[1].start_line == 3);
    CHECK(outcome.candidates[0].occurrence_count == 2);
}

TEST_CASE("locate_anchor matches marker lines by marker-ness") {
    const Marker m;
    const std::string file = "one\n    " + m.text + "\nthree\n";
    const auto outcome = locate_anchor(file, "one\n/* MIDDLE CODE TO COMPLETE */ extra\nthree", m);
    REQUIRE(outcome.status == AnchorStatus::ok);
    CHECK(outcome.span->start_line == 1);
    CHECK(outcome.span->end_line == 3);
}

TEST_CASE("apply_sri splices the replacement over the anchor") {
    SriBlock block;
    block.search = "int add(int a, int b) {\n    return a + b;\n}";
    block.replace = "int add(int a, int b) {\n    // overflow-checked\n    return a + b;\n}";
    const auto result = apply_sri(kFile, block);
    CHECK(result ==
          "#include <cstdio>\n"
          "\n"
          "int add(int a, int b) {\n"
          "    // overflow-checked\n"
          "    return a + b;\n"
          "}\n"
          "\n"
          "int main() {\n"
          "    printf(\"%d\\n\", add(1, 2));\n"
          "    return 0;\n"
          "}\n");
}

TEST_CASE("apply_sri identity edit returns the file unchanged") {
    SriBlock block;
    block.search = "int main() {";
    block.replace = "int main() {";
    CHECK(apply_sri(kFile, block) == kFile);
}

TEST_CASE("apply_sri leaves bytes outside the span untouched") {
    SriBlock block;
    block.search = "    return 0;";
    block.replace = "    return 1;";
    const auto result = apply_sri(kFile, block);
    const auto span = locate_anchor(kFile, block.search).span;
    REQUIRE(span.has_value());
    CHECK(result.substr(0, span->start_byte) == kFile.substr(0, span->start_byte));
    CHECK(result.substr(span->start_byte + block.replace.size()) ==
          kFile.substr(span->end_byte));
}

TEST_CASE("apply_sri errors carry the anchor status") {
    SriBlock missing{"not in the file", "x", false};
    CHECK_THROWS_AS(apply_sri(kFile, missing), anchor_error);
    try {
        apply_sri(kFile, missing);
    } catch (const anchor_error& e) {
        CHECK(e.status() == AnchorStatus::not_found);
        CHECK(e.occurrences() == 0);
    }

    const std::string repeated = "x = 1\nx = 1\n";
    SriBlock dup{"x = 1", "x = 2", false};
    try {
        apply_sri(repeated, dup);
        FAIL("expected anchor_error");
    } catch (const anchor_error& e) {
        CHECK(e.status() == AnchorStatus::ambiguous);
        CHECK(e.occurrences() == 2);
    }
}

TEST_CASE("ambiguity override picks the occurrence nearest the marker") {
    const Marker m;
    const std::string file = "pad\nx = 1\npad\npad\npad\n" + m.text + "\nx = 1\nend\n";
    SriBlock block{"x = 1", "x = 99", false};

    ApplyOptions nearest;
    nearest.nearest_to_marker = true;
    const auto result = apply_sri(file, block, m, nearest);
    CHECK(result == "pad\nx = 1\npad\npad\npad\n" + m.text + "\nx = 99\nend\n");
}

TEST_CASE("apply_sri preserves CRLF files") {
    const std::string file = "alpha\r\nbeta\r\ngamma\r\n";
    SriBlock block{"beta", "BETA", false};
    CHECK(apply_sri(file, block) == "alpha\r\nBETA\r\ngamma\r\n");

    SriBlock identity{"beta", "beta", false};
    CHECK(apply_sri(file, identity) == file);
}

TEST_CASE("apply_sri with an empty replacement deletes the span lines") {
    SriBlock block{"\nint add(int a, int b) {\n    return a + b;\n}\n", "", false};
    const auto result = apply_sri(kFile, block);
    CHECK(result ==
          "#include <cstdio>\n"
          "\n"
          "int main() {\n"
          "    printf(\"%d\\n\", add(1, 2));\n"
          "    return 0;\n"
          "}\n");
}

TEST_CASE("apply_sri handles files without a trailing newline") {
    const std::string file = "alpha\nbeta";
    SriBlock block{"beta", "BETA", false};
    CHECK(apply_sri(file, block) == "alpha\nBETA");
}

TEST_CASE("to_unified_diff emits a patch-consumable hunk") {
    SriBlock block;
    block.search = "int add(int a, int b) {\n    return a + b;\n}";
    block.replace = "int add(int a, int b) {\n    return a + b + 1;\n}";
    const auto diff = to_unified_diff(kFile, block, "demo.c");
    CHECK(diff ==
          "--- a/demo.c\n"
          "+++ b/demo.c\n"
          "@@ -1,7 +1,7 @@\n"
          " #include <cstdio>\n"
          " \n"
          " int add(int a, int b) {\n"
          "-    return a + b;\n"
          "+    return a + b + 1;\n"
          " }\n"
          " \n"
          " int main() {\n");
}

TEST_CASE("to_unified_diff of an identity edit is empty") {
    SriBlock block{"int main() {", "int main() {", false};
    CHECK(to_unified_diff(kFile, block, "demo.c").empty());
}

TEST_CASE("to_unified_diff marks a missing final newline") {
    const std::string file = "alpha\nbeta";
    SriBlock block{"beta", "BETA", false};
    const auto diff = to_unified_diff(file, block, "f.txt");
    CHECK(diff ==
          "--- a/f.txt\n"
          "+++ b/f.txt\n"
          "@@ -1,2 +1,2 @@\n"
          " alpha\n"
          "-beta\n"
          "\\ No newline at end of file\n"
          "+BETA\n"
          "\\ No newline at end of file\n");
}

namespace {

// Applies a unified diff with the system patch tool and returns the result.
std::string run_patch_tool(const std::string& original, const std::string& diff) {
    const std::string dir = std::string("/tmp/sri_patch_test_") + std::to_string(::getpid());
    std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
    {
        std::ofstream f(dir + "/file");
        f << original;
    }
    {
        std::ofstream p(dir + "/edit.diff");
        p << diff;
    }
    const auto status = std::system(
        ("cd " + dir + " && patch -p1 --posix --quiet file < edit.diff > /dev/null 2>&1").c_str());
    REQUIRE(status == 0);
    std::ifstream f(dir + "/file");
    std::string out((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    std::system(("rm -rf " + dir).c_str());
    return out;
}

}  // namespace

TEST_CASE("to_unified_diff agrees with apply_sri via the system patch tool") {
    struct Case {
        std::string search, replace;
    };
    const Case cases[] = {
        {"    return a + b;", "    return a * b;"},
        {"int add(int a, int b) {\n    return a + b;\n}",
         "int add(int a, int b) {\n    long r = a;\n    r += b;\n    return (int)r;\n}"},
        {"    return 0;", "    fflush(stdout);\n    return 0;"},
        {"\nint add(int a, int b) {\n    return a + b;\n}\n", ""},
        {"#include <cstdio>", "#include <cstdio>\n#include <cstdlib>"},
    };
    for (const auto& c : cases) {
        SriBlock block{c.search, c.replace, false};
        const auto expected = apply_sri(kFile, block);
        const auto diff = to_unified_diff(kFile, block, "file");
        INFO("diff:\n" << diff);
        CHECK(run_patch_tool(kFile, diff) == expected);
    }
}
