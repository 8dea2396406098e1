#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "sri/perturbation.hpp"

using namespace sri;

namespace {

CompletionTask window_task() {
    CompletionTask task;
    task.prefix =
        "static int config_limit = 40;\n"
        "\n"
        "int total(const int *values, int count) {\n"
        "    int sum = 0;\n"
        "    for (int i = 0; i < count; i++) {\n";
    task.middle = "        sum += values[i];\n";
    task.suffix =
        "    }\n"
        "    return sum;\n"
        "}\n"
        "\n"
        "static int unrelated_far_away = 7;\n";
    task.path = "window.c";
    return task;
}

std::multiset<char> nonblank_chars(std::string_view s) {
    std::multiset<char> out;
    for (const char c : s)
        if (!is_blank(std::string_view(&c, 1))) out.insert(c);
    return out;
}

}  // namespace

TEST_CASE("perturbation is deterministic in the seed") {
    const auto task = window_task();
    CHECK(perturb_window(task, 99) == perturb_window(task, 99));

    std::set<std::string> sources;
    for (std::uint64_t seed = 0; seed < 8; ++seed)
        sources.insert(perturb_window(task, seed).perturbed_source);
    CHECK(sources.size() > 1);
}

TEST_CASE("perturbed lines stay inside the window and off the marker") {
    const auto task = window_task();
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto flex = perturb_window(
            task, {kAllPerturbOperators.begin(), kAllPerturbOperators.end()}, 3, 5,
            seed);
        REQUIRE(flex.perturbations.size() == 3);

        const auto marked = insert_marker(task);
        const auto original = split_lines(marked);
        const auto perturbed = split_lines(flex.perturbed_source);
        REQUIRE(original.size() == perturbed.size());

        std::size_t marker_line = 0;
        for (std::size_t i = 0; i < original.size(); ++i)
            if (original[i].find(kMiddleMarkerText) != std::string_view::npos)
                marker_line = i + 1;

        std::set<std::size_t> recorded;
        for (const auto& p : flex.perturbations) {
            CHECK(recorded.insert(p.line_number).second);  // no line twice
            CHECK(p.line_number != marker_line);
            const auto distance = p.line_number > marker_line
                                      ? p.line_number - marker_line
                                      : marker_line - p.line_number;
            CHECK(distance <= 5);
            CHECK(original[p.line_number - 1] == p.original_line);
            CHECK(perturbed[p.line_number - 1] == p.perturbed_line);
            CHECK(p.original_line != p.perturbed_line);
        }
        // Locality: lines off the record are byte-identical.
        for (std::size_t i = 0; i < original.size(); ++i)
            if (!recorded.count(i + 1)) CHECK(original[i] == perturbed[i]);
    }
}

TEST_CASE("recorded original lines restore the source exactly") {
    const auto task = window_task();
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto flex = perturb_window(task, seed);
        const auto views = split_lines(flex.perturbed_source);
        std::vector<std::string> lines(views.begin(), views.end());
        for (const auto& p : flex.perturbations) lines[p.line_number - 1] = p.original_line;
        auto restored = join_lines(lines);
        if (flex.perturbed_source.ends_with("\n")) restored += "\n";
        CHECK(restored == insert_marker(task));
    }
}

TEST_CASE("scramble keeps the character multiset and the indentation") {
    const auto task = window_task();
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto flex =
            perturb_window(task, {PerturbOperator::line_scramble}, 2, 5, seed);
        for (const auto& p : flex.perturbations) {
            REQUIRE(p.op == PerturbOperator::line_scramble);
            CHECK(nonblank_chars(p.perturbed_line) == nonblank_chars(p.original_line));
            CHECK(indentation_of(p.perturbed_line) == indentation_of(p.original_line));
            CHECK(p.perturbed_line.size() == p.original_line.size());
            // Interior whitespace does not move either.
            for (std::size_t i = 0; i < p.original_line.size(); ++i)
                CHECK(is_blank(std::string_view(&p.original_line[i], 1)) ==
                      is_blank(std::string_view(&p.perturbed_line[i], 1)));
        }
    }
}

TEST_CASE("token transposition swaps adjacent identifiers") {
    CompletionTask task;
    task.prefix = "return (var profile);\n";
    task.suffix = "";
    // The prefix line has exactly one adjacent identifier pair, so the swap
    // is forced.
    const auto flex = perturb_window(task, {PerturbOperator::token_transpose}, 1, 5, 4);
    REQUIRE(flex.perturbations.size() == 1);
    CHECK(flex.perturbations[0].perturbed_line == "return (profile var);");
}

TEST_CASE("token transposition covers the foreach pattern") {
    CompletionTask task;
    task.prefix = "foreach (var profile in items)\n";
    task.suffix = "";
    std::set<std::string> outcomes;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto flex =
            perturb_window(task, {PerturbOperator::token_transpose}, 1, 5, seed);
        REQUIRE(flex.perturbations.size() == 1);
        outcomes.insert(flex.perturbations[0].perturbed_line);
    }
    const std::set<std::string> valid = {
        "foreach (profile var in items)",
        "foreach (var in profile items)",
        "foreach (var profile items in)",
    };
    for (const auto& line : outcomes) CHECK(valid.count(line) == 1);
    CHECK(outcomes.count("foreach (profile var in items)") == 1);
}

TEST_CASE("identifier typos change exactly one character inside an identifier") {
    const auto task = window_task();
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto flex =
            perturb_window(task, {PerturbOperator::identifier_typo}, 2, 5, seed);
        for (const auto& p : flex.perturbations) {
            REQUIRE(p.op == PerturbOperator::identifier_typo);
            REQUIRE(p.perturbed_line.size() == p.original_line.size());
            std::size_t diffs = 0, at = 0;
            for (std::size_t i = 0; i < p.original_line.size(); ++i) {
                if (p.original_line[i] != p.perturbed_line[i]) {
                    ++diffs;
                    at = i;
                }
            }
            CHECK(diffs == 1);
            CHECK(std::islower(static_cast<unsigned char>(p.perturbed_line[at])));
            // The changed byte sits inside an identifier of the original line.
            bool inside = false;
            for (const auto& t : sri::detail::identifier_tokens(p.original_line))
                inside = inside || (at >= t.begin && at < t.end);
            CHECK(inside);
        }
    }
}

TEST_CASE("blank and comment-only lines are never targets") {
    CompletionTask task;
    task.prefix =
        "// configuration block\n"
        "# tuning knob\n"
        "\n"
        "int live_code_line = 1;\n";
    task.suffix = "\n/* trailing note */\n";
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto flex = perturb_window(task, seed);
        REQUIRE(flex.perturbations.size() == 1);
        CHECK(flex.perturbations[0].original_line == "int live_code_line = 1;");
    }
}

TEST_CASE("a window of blanks and comments raises NothingToPerturb") {
    CompletionTask task;
    task.prefix = "// only a comment\n\n";
    task.suffix = "\n# another comment\n";
    CHECK_THROWS_AS(perturb_window(task, 1), NothingToPerturb);

    CHECK_THROWS_AS(perturb_window(window_task(), {}, 2, 5, 1), std::invalid_argument);
}

TEST_CASE("count is capped by the available lines") {
    CompletionTask task;
    task.prefix = "alpha beta gamma;\ndelta epsilon;\n";
    task.suffix = "";
    const auto flex = perturb_window(
        task, {kAllPerturbOperators.begin(), kAllPerturbOperators.end()}, 9, 5, 2);
    CHECK(flex.perturbations.size() == 2);
}

TEST_CASE("recorded operators are the ones that ran") {
    // A line of identical symbols defeats the scrambler, so the fallback
    // chain must try, and record, another operator.
    CompletionTask task;
    task.prefix = "aaa aaa aaa bbb\n";
    task.suffix = "";
    const auto flex = perturb_window(task, {PerturbOperator::line_scramble,
                                            PerturbOperator::identifier_typo},
                                     1, 5, 3);
    REQUIRE(flex.perturbations.size() == 1);
    const auto& p = flex.perturbations[0];
    if (p.op == PerturbOperator::line_scramble)
        CHECK(nonblank_chars(p.perturbed_line) == nonblank_chars(p.original_line));
    else
        CHECK(p.op == PerturbOperator::identifier_typo);
}

TEST_CASE("annotation wraps exactly the perturbed lines") {
    const auto task = window_task();
    const auto flex = perturb_window(task, 17);
    const auto annotated = annotate_perturbations(flex);

    const auto plain = split_lines(flex.perturbed_source);
    const auto marked_up = split_lines(annotated);
    REQUIRE(plain.size() == marked_up.size());

    std::set<std::size_t> recorded;
    for (const auto& p : flex.perturbations) recorded.insert(p.line_number);
    for (std::size_t i = 0; i < plain.size(); ++i) {
        if (recorded.count(i + 1)) {
            CHECK(strip(marked_up[i]).starts_with("@ "));
            CHECK(strip(marked_up[i]).ends_with(" @"));
            CHECK(indentation_of(marked_up[i]) == indentation_of(plain[i]));
        } else {
            CHECK(marked_up[i] == plain[i]);
        }
    }
}

TEST_CASE("operator names round-trip") {
    for (const auto op : kAllPerturbOperators)
        CHECK(perturb_operator_from_string(std::string(to_string(op))) == op);
    CHECK_THROWS_AS(perturb_operator_from_string("line_swap"), std::invalid_argument);
}
