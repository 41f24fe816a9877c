#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nblint/diagnostics.hpp"
#include "nblint/source.hpp"
#include "nblint/style.hpp"

using namespace nblint;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_implemented(const std::string& code) {
    const auto& codes = style::implemented_codes();
    return std::binary_search(codes.begin(), codes.end(), code);
}

// Golden lines look like "12:3: E225 missing whitespace around operator".
// Keep only findings whose code the engine implements, so reference-only
// rules (E741, W605, ...) never enter the comparison.
std::string filter_golden(const std::string& golden) {
    std::istringstream in(golden);
    std::string line, out;
    while (std::getline(in, line)) {
        const auto first = line.find(": ");
        REQUIRE(first != std::string::npos);
        const auto code_end = line.find(' ', first + 2);
        REQUIRE(code_end != std::string::npos);
        const std::string code = line.substr(first + 2, code_end - first - 2);
        if (is_implemented(code)) out += line + "\n";
    }
    return out;
}

std::string render(const std::vector<Diagnostic>& diags) {
    std::string out;
    char buf[32];
    for (const auto& d : diags) {
        std::snprintf(buf, sizeof buf, "%d:%d: ", d.line, d.column);
        out += buf;
        out += d.code;
        out += ' ';
        out += d.message;
        out += '\n';
    }
    return out;
}

std::vector<Diagnostic> check_text(const std::string& source,
                                   const style::RuleConfig& config = {}) {
    return style::check_source(PythonSource::from_text(source), config, "snippet.py");
}

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code) {
    return std::any_of(diags.begin(), diags.end(),
                       [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST_SUITE("style") {

TEST_CASE("fixture corpus matches the frozen reference goldens") {
    const fs::path dir = fs::path(NBLINT_TEST_DIR) / "fixtures" / "style";
    std::vector<fs::path> snippets;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".py") snippets.push_back(entry.path());
    }
    std::sort(snippets.begin(), snippets.end());
    REQUIRE(snippets.size() >= 60);

    const auto all = style::RuleConfig::with_all_checks();
    size_t total_findings = 0;
    std::set<std::string> codes_seen;
    for (const auto& snippet : snippets) {
        CAPTURE(snippet.filename().string());
        fs::path golden_path = snippet;
        golden_path.replace_extension(".golden");
        const std::string expected = filter_golden(read_file(golden_path));

        const auto src = PythonSource::from_text(read_file(snippet));
        const auto diags = style::check_source(src, all, snippet.string());
        CHECK_EQ(render(diags), expected);
        total_findings += diags.size();
        for (const auto& d : diags) codes_seen.insert(d.code);
    }
    // The corpus must stay meaningful: plenty of findings, and every
    // catalog code observed at least once.
    CHECK(total_findings >= 150);
    for (const auto& rule : style::rule_catalog()) {
        CAPTURE(rule.code);
        CHECK(codes_seen.count(rule.code) == 1);
    }
}

TEST_CASE("rule catalog is exactly the documented fourteen rules") {
    const auto rules = style::rule_catalog();
    REQUIRE(rules.size() == 14);
    std::vector<std::string> codes;
    for (const auto& r : rules) codes.push_back(r.code);
    const std::vector<std::string> expected = {"E111", "E128", "E201", "E225", "E231",
                                               "E251", "E261", "E265", "E302", "E501",
                                               "E703", "W291", "W293", "W292"};
    CHECK(std::set<std::string>(codes.begin(), codes.end()) ==
          std::set<std::string>(expected.begin(), expected.end()));
    for (const auto& r : rules) {
        CAPTURE(r.code);
        CHECK_FALSE(r.message_template.empty());
        CHECK(r.enabled);
        CHECK(r.excluded_from_stats == (r.code == "W292"));
        if (r.code == "E501" || r.code[0] == 'W') {
            CHECK(r.phase == style::RulePhase::physical);
        } else if (r.code == "E302") {
            CHECK(r.phase == style::RulePhase::blank_structure);
        } else {
            CHECK(r.phase == style::RulePhase::logical);
        }
    }
    CHECK(std::string(style::to_string(style::RulePhase::physical)) == "physical");
    CHECK(std::string(style::to_string(style::RulePhase::logical)) == "logical");
    CHECK(std::string(style::to_string(style::RulePhase::blank_structure)) ==
          "blank-structure");
}

TEST_CASE("implemented and default code lists are sorted and consistent") {
    const auto& impl = style::implemented_codes();
    const auto& dflt = style::default_codes();
    CHECK(std::is_sorted(impl.begin(), impl.end()));
    CHECK(std::is_sorted(dflt.begin(), dflt.end()));
    CHECK(impl.size() == 49);
    CHECK(dflt.size() == 16);
    // Default = catalog + the two companions sharing the whitespace scan.
    for (const auto& rule : style::rule_catalog()) CHECK(is_implemented(rule.code));
    CHECK(std::binary_search(dflt.begin(), dflt.end(), std::string("E202")));
    CHECK(std::binary_search(dflt.begin(), dflt.end(), std::string("E203")));
    for (const auto& code : dflt) CHECK(is_implemented(code));
    // Codes the engine does not port stay out.
    CHECK_FALSE(is_implemented("E741"));
    CHECK_FALSE(is_implemented("W605"));
    CHECK_FALSE(is_implemented("W503"));
}

TEST_CASE("rule config selection semantics") {
    style::RuleConfig dflt;
    CHECK(dflt.enabled_codes() == std::set<std::string>(style::default_codes().begin(),
                                                        style::default_codes().end()));
    CHECK(dflt.is_enabled("E501"));
    CHECK_FALSE(dflt.is_enabled("E704"));

    const auto all = style::RuleConfig::with_all_checks();
    CHECK(all.enabled_codes() == std::set<std::string>(style::implemented_codes().begin(),
                                                       style::implemented_codes().end()));

    style::RuleConfig sel;
    sel.select = {"E2"};
    const auto e2 = sel.enabled_codes();
    CHECK(e2.count("E201") == 1);
    CHECK(e2.count("E226") == 1);  // selection reaches beyond the default set
    CHECK(e2.count("W291") == 0);
    CHECK(e2.count("E501") == 0);

    style::RuleConfig sel_ign;
    sel_ign.select = {"E2"};
    sel_ign.ignore = {"E22"};
    const auto pruned = sel_ign.enabled_codes();
    CHECK(pruned.count("E201") == 1);
    CHECK(pruned.count("E225") == 0);
    CHECK(pruned.count("E228") == 0);

    style::RuleConfig ign;
    ign.ignore = {"E231", "W"};
    const auto no_commas = ign.enabled_codes();
    CHECK(no_commas.count("E231") == 0);
    CHECK(no_commas.count("W291") == 0);
    CHECK(no_commas.count("E225") == 1);

    style::RuleConfig exact;
    exact.select = {"W292"};
    CHECK(exact.enabled_codes() == std::set<std::string>{"W292"});
}

TEST_CASE("basic diagnostics carry position, severity, and category") {
    const auto diags = check_text("x=1 \n");
    REQUIRE(diags.size() == 2);
    CHECK(diags[0].code == "E225");
    CHECK(diags[0].line == 1);
    CHECK(diags[0].column == 2);
    CHECK(diags[0].severity == Severity::error);
    CHECK(diags[0].category == Category::style);
    CHECK(diags[0].path == "snippet.py");
    CHECK_FALSE(diags[0].cell_index.has_value());
    CHECK(diags[1].code == "W291");
    CHECK(diags[1].column == 4);
    CHECK(diags[1].severity == Severity::warning);
}

TEST_CASE("diagnostics come back sorted by position then code") {
    const auto diags = check_text("def f( x ):\n  return x\ny=1\n",
                                  style::RuleConfig::with_all_checks());
    CHECK(std::is_sorted(diags.begin(), diags.end(), diagnostic_before));
    REQUIRE(diags.size() >= 3);
    CHECK(has_code(diags, "E201"));
    CHECK(has_code(diags, "E111"));
    CHECK(has_code(diags, "E305"));  // companion code, surfaced by all_checks
}

TEST_CASE("default configuration hides non-catalog companions") {
    style::RuleConfig dflt;
    const auto diags = style::check_source(
        PythonSource::from_text("def f( x ):\n  return x\ny=1\n"), dflt, "s.py");
    CHECK(has_code(diags, "E201"));
    CHECK(has_code(diags, "E111"));
    CHECK_FALSE(has_code(diags, "E305"));
}

TEST_CASE("line length limit is configurable") {
    const std::string line = "value = '" + std::string(80, 'a') + "'\n";  // 90 chars
    style::RuleConfig dflt;
    auto diags = style::check_source(PythonSource::from_text(line), dflt, "s.py");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "E501");
    CHECK(diags[0].column == 80);
    CHECK(diags[0].message == "line too long (90 > 79 characters)");

    style::RuleConfig wide;
    wide.max_line_length = 100;
    CHECK(style::check_source(PythonSource::from_text(line), wide, "s.py").empty());
}

TEST_CASE("suppressed lines produce no diagnostics") {
    PythonSource src = PythonSource::from_text("x = 1\n   \ny = 2\n");
    REQUIRE(check_text("x = 1\n   \ny = 2\n").size() == 1);  // W293 when not suppressed
    src.suppressed_lines.insert(2);
    CHECK(style::check_source(src, {}, "s.py").empty());
}

TEST_CASE("suppressed blank lines do not count as statement separators") {
    const std::string body = "def f():\n    pass\n\n\ndef g():\n    pass\n";
    CHECK(check_text(body).empty());  // two real blank lines: fine

    PythonSource src = PythonSource::from_text(body);
    src.suppressed_lines.insert(3);
    src.suppressed_lines.insert(4);
    const auto diags = style::check_source(src, {}, "s.py");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "E302");
    CHECK(diags[0].line == 5);
    CHECK(diags[0].message == "expected 2 blank lines, found 0");
}

TEST_CASE("line map translates positions back to cell coordinates") {
    PythonSource src = PythonSource::from_text("x=1\n");
    src.line_map = {{3, 17}};  // this text is line 17 of cell 3
    const auto diags = style::check_source(src, {}, "nb.ipynb", 3);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "E225");
    CHECK(diags[0].line == 17);
    CHECK(diags[0].column == 2);
    CHECK(diags[0].cell_index == 3);
}

TEST_CASE("tokenization failure still runs physical rules") {
    // The unterminated string kills the logical pass; the trailing
    // whitespace on line 2 is a physical finding and survives.
    const auto diags = check_text("s = 'abc\ny=1  \n");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "W291");
    CHECK(diags[0].line == 2);
    CHECK(diags[0].column == 4);
    // y=1 would be E225 if the logical pass had run.
}

TEST_CASE("missing final newline is reported") {
    const auto diags = check_text("x = 1");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "W292");
    CHECK(diags[0].line == 1);
    CHECK(diags[0].column == 6);
}

TEST_CASE("file end bookkeeping codes") {
    CHECK(style::is_file_end_code("W292"));
    CHECK(style::is_file_end_code("W391"));
    CHECK_FALSE(style::is_file_end_code("E501"));
    CHECK_FALSE(style::is_file_end_code("W291"));
}

TEST_CASE("error ratio skips file-end codes and non-style categories") {
    std::vector<Diagnostic> diags;
    diags.push_back(make_diagnostic("E225", "m", "p", {}, 1, 1, Category::style));
    diags.push_back(make_diagnostic("E501", "m", "p", {}, 2, 1, Category::style));
    diags.push_back(make_diagnostic("W292", "m", "p", {}, 3, 1, Category::style));
    diags.push_back(make_diagnostic("U001", "m", "p", {}, 4, 1, Category::unused));

    CHECK_FALSE(style::error_ratio(diags, 0).has_value());
    auto ratio = style::error_ratio(diags, 10);
    REQUIRE(ratio.has_value());
    CHECK(*ratio == doctest::Approx(0.2));
    auto with_end = style::error_ratio(diags, 10, true);
    REQUIRE(with_end.has_value());
    CHECK(*with_end == doctest::Approx(0.3));
    auto empty = style::error_ratio({}, 5);
    REQUIRE(empty.has_value());
    CHECK(*empty == 0.0);
}

}  // TEST_SUITE
