#include <doctest.h>

#include <string>
#include <vector>

#include "nblint/logical_lines.hpp"
#include "nblint/text.hpp"
#include "nblint/tokenize.hpp"

using namespace nblint;

namespace {

std::vector<py::LogicalLine> lines_of(const std::string& source) {
    return py::logical_lines(py::tokenize_text(source));
}

}  // namespace

TEST_SUITE("logical_lines") {

TEST_CASE("mute_string masks interiors but keeps prefix, quotes, and length") {
    CHECK(py::mute_string(U"'ab'") == U"'xx'");
    CHECK(py::mute_string(U"\"\"") == U"\"\"");
    CHECK(py::mute_string(U"r'a,b'") == U"r'xxx'");
    CHECK(py::mute_string(U"'''ab'''") == U"'''xx'''");
    CHECK(py::mute_string(U"f\"{x}\"") == U"f\"xxx\"");
    CHECK(py::mute_string(U"b'\\n'") == U"b'xx'");
}

TEST_CASE("single statement joins verbatim") {
    const auto lls = lines_of("x = 1\n");
    REQUIRE(lls.size() == 1);
    CHECK(lls[0].text == U"x = 1");
    CHECK(lls[0].first_line == 1);
    CHECK(lls[0].last_line == 1);
}

TEST_CASE("bracket continuation joins across lines without injected spaces") {
    const auto lls = lines_of("x = (1,\n     2)\n");
    REQUIRE(lls.size() == 1);
    CHECK(lls[0].text == U"x = (1, 2)");
    CHECK(lls[0].first_line == 1);
    CHECK(lls[0].last_line == 2);
}

TEST_CASE("backslash continuation collapses the break to one space") {
    const auto lls = lines_of("total = 1 + \\\n    2\n");
    REQUIRE(lls.size() == 1);
    // The leading indentation of the continuation line is not copied; the
    // break itself becomes a single separating space.
    CHECK(lls[0].text == U"total = 1 + 2");
}

TEST_CASE("comment-only and blank lines produce no logical line") {
    const auto lls = lines_of("# heading\n\nx = 1\n# tail\n");
    REQUIRE(lls.size() == 1);
    CHECK(lls[0].text == U"x = 1");
}

TEST_CASE("string contents are masked in the joined text") {
    const auto lls = lines_of("s = 'a, b' , 2\n");
    REQUIRE(lls.size() == 1);
    CHECK(lls[0].text == U"s = 'xxxx' , 2");
}

TEST_CASE("bracket depth is tracked after each token") {
    const auto lls = lines_of("f(a, [b])\n");
    REQUIRE(lls.size() == 1);
    const auto& ll = lls[0];
    REQUIRE(ll.tokens.size() == ll.bracket_depths.size());
    // f ( a , [ b ] ) NEWLINE
    std::vector<int> expect = {0, 1, 1, 1, 2, 2, 1, 0, 0};
    REQUIRE(ll.bracket_depths.size() == expect.size());
    for (size_t i = 0; i < expect.size(); ++i) {
        CAPTURE(i);
        CHECK(ll.bracket_depths[i] == expect[i]);
    }
}

TEST_CASE("map_logical_offset returns physical positions") {
    const auto lls = lines_of("x = (1,\n     2)\n");
    REQUIRE(lls.size() == 1);
    const auto& ll = lls[0];
    // Offset 0 is the start of the first token.
    CHECK(py::map_logical_offset(ll.offset_map, 0) == py::Pos{1, 0});
    // "x = (1, 2)": offset 8 is the '2' that lives on the second line.
    REQUIRE(ll.text.size() > 8);
    CHECK(ll.text[8] == U'2');
    CHECK(py::map_logical_offset(ll.offset_map, 8) == py::Pos{2, 5});
    // Offsets inside a token map to positions inside that token's span.
    CHECK(py::map_logical_offset(ll.offset_map, 4) == py::Pos{1, 4});
}

TEST_CASE("multiple statements split at depth-zero newlines only") {
    const auto lls = lines_of("a = [1,\n2]\nb = 3\n");
    REQUIRE(lls.size() == 2);
    CHECK(lls[0].text == U"a = [1, 2]");
    CHECK(lls[1].text == U"b = 3");
    CHECK(lls[1].first_line == 3);
}

TEST_CASE("semicolons stay inside one logical line") {
    const auto lls = lines_of("a = 1; b = 2\n");
    REQUIRE(lls.size() == 1);
    CHECK(lls[0].text == U"a = 1; b = 2");
}

TEST_CASE("join_logical pads intra-line gaps verbatim") {
    const auto toks = py::tokenize_text("x  =   1\n");
    const auto lls = py::logical_lines(toks);
    REQUIRE(lls.size() == 1);
    CHECK(lls[0].text == U"x  =   1");
}

TEST_CASE("multiline string keeps quotes and masks the body to its joined length") {
    const auto lls = lines_of("s = '''one\ntwo'''\n");
    REQUIRE(lls.size() == 1);
    // The literal spans two physical lines; the masked text has one 'x' per
    // interior character including the line break ("one\ntwo" -> 7 of them).
    CHECK(lls[0].first_line == 1);
    CHECK(lls[0].last_line == 2);
    CHECK(lls[0].text == U"s = '''xxxxxxx'''");
}

}  // TEST_SUITE
