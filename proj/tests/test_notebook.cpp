#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nblint/notebook.hpp"
#include "nblint/source.hpp"

using namespace nblint;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(NBLINT_TEST_DIR) / "fixtures" / "notebooks";
const fs::path kProject = fs::path(NBLINT_TEST_DIR) / "fixtures" / "project";

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nb::Notebook load(const std::string& name, const nb::ParseOptions& options = {}) {
    return nb::parse_notebook(read_file(kFixtures / name), name, options);
}

nb::Cell code_cell(std::vector<std::string> lines, int index = 0) {
    nb::Cell cell;
    cell.kind = nb::CellKind::code;
    cell.source_lines = std::move(lines);
    cell.index_in_document = index;
    return cell;
}

}  // namespace

TEST_CASE("version 4 documents parse into ordered cells") {
    nb::Notebook doc = load("basic_v4.ipynb");

    CHECK(doc.path == "basic_v4.ipynb");
    CHECK(doc.format_major == 4);
    CHECK(doc.format_minor == 5);
    CHECK(doc.metadata_language == "python");
    REQUIRE(doc.cells.size() == 6);

    const auto kinds = std::vector<nb::CellKind>{
        nb::CellKind::markdown, nb::CellKind::code, nb::CellKind::markdown,
        nb::CellKind::code,     nb::CellKind::raw,  nb::CellKind::code};
    for (size_t i = 0; i < doc.cells.size(); ++i) {
        CAPTURE(i);
        CHECK(doc.cells[i].kind == kinds[i]);
        CHECK(doc.cells[i].index_in_document == static_cast<int>(i));
    }

    // Joined-and-resplit source: trailing newlines dropped, content intact.
    CHECK(doc.cells[1].source_lines ==
          std::vector<std::string>{"import pandas as pd", "df = pd.read_csv('sales.csv')"});
    CHECK(doc.cells[0].source_lines ==
          std::vector<std::string>{"# Sales analysis", "Load and explore the data."});
    CHECK(doc.cells[5].source_lines.empty());

    // Execution counts: present, present, absent (null).
    REQUIRE(doc.cells[1].execution_count.has_value());
    CHECK(*doc.cells[1].execution_count == 1);
    REQUIRE(doc.cells[3].execution_count.has_value());
    CHECK(*doc.cells[3].execution_count == 2);
    CHECK_FALSE(doc.cells[5].execution_count.has_value());
}

TEST_CASE("carriage returns never survive into cell lines") {
    nb::Notebook doc = load("crlf_cells.ipynb");
    REQUIRE(doc.cells.size() == 1);
    CHECK(doc.cells[0].source_lines ==
          std::vector<std::string>{"first = 1", "second = 2", "third = first + second"});
    for (const auto& line : doc.cells[0].source_lines)
        CHECK(line.find('\r') == std::string::npos);
}

TEST_CASE("legacy version 3 worksheets flatten in document order") {
    nb::Notebook doc = load("legacy_v3.ipynb");

    CHECK(doc.format_major == 3);
    CHECK(doc.metadata_language.empty());  // v3 metadata declares no language
    REQUIRE(doc.cells.size() == 4);

    // heading -> markdown, then code, markdown, and the second worksheet's code.
    CHECK(doc.cells[0].kind == nb::CellKind::markdown);
    CHECK(doc.cells[0].source_lines == std::vector<std::string>{"Overview"});
    CHECK(doc.cells[1].kind == nb::CellKind::code);
    CHECK(doc.cells[1].source_lines == std::vector<std::string>{"print('hello')", "a = 1"});
    REQUIRE(doc.cells[1].execution_count.has_value());  // from prompt_number
    CHECK(*doc.cells[1].execution_count == 2);
    CHECK(doc.cells[2].kind == nb::CellKind::markdown);
    CHECK(doc.cells[3].kind == nb::CellKind::code);
    CHECK(doc.cells[3].source_lines == std::vector<std::string>{"b = a + 1"});  // string source
    REQUIRE(doc.cells[3].execution_count.has_value());
    CHECK(*doc.cells[3].execution_count == 3);

    for (size_t i = 0; i < doc.cells.size(); ++i)
        CHECK(doc.cells[i].index_in_document == static_cast<int>(i));
}

TEST_CASE("malformed bytes raise MalformedDocument") {
    CHECK_THROWS_AS(load("malformed.ipynb"), nb::MalformedDocument);
    CHECK_THROWS_AS(nb::parse_notebook("", "x"), nb::MalformedDocument);
    CHECK_THROWS_AS(nb::parse_notebook("[1, 2]", "x"), nb::MalformedDocument);
    CHECK_THROWS_AS(nb::parse_notebook("{\"nbformat\": 4}", "x"), nb::MalformedDocument);
    CHECK_THROWS_AS(nb::parse_notebook("{\"cells\": []}", "x"), nb::MalformedDocument);
    CHECK_THROWS_AS(nb::parse_notebook("{\"cells\": 7, \"nbformat\": 4}", "x"),
                    nb::MalformedDocument);
}

TEST_CASE("unsupported format versions are rejected with the version attached") {
    try {
        load("unsupported_v2.ipynb");
        FAIL("expected UnsupportedVersion");
    } catch (const nb::UnsupportedVersion& e) {
        CHECK(e.major == 2);
    }
    // A huge version must not alias into a supported one.
    CHECK_THROWS_AS(
        nb::parse_notebook("{\"cells\": [], \"nbformat\": 8589934596, \"nbformat_minor\": 0}", "x"),
        nb::UnsupportedVersion);
}

TEST_CASE("non-Python documents are rejected unless forced") {
    try {
        load("non_python.ipynb");
        FAIL("expected NonPythonNotebook");
    } catch (const nb::NonPythonNotebook& e) {
        CHECK(e.language == "R");
    }

    nb::ParseOptions force;
    force.force_language = true;
    nb::Notebook doc = load("non_python.ipynb", force);
    CHECK(doc.metadata_language == "R");
    REQUIRE(doc.cells.size() == 1);

    // "python3"-style declarations count as Python.
    const std::string py3 =
        "{\"cells\": [], \"nbformat\": 4, \"nbformat_minor\": 5,"
        " \"metadata\": {\"language_info\": {\"name\": \"Python3\"}}}";
    CHECK_NOTHROW(nb::parse_notebook(py3, "x"));
}

TEST_CASE("line magics, shell escapes and help queries blank out; positions survive") {
    nb::Cell cell = code_cell({"%matplotlib inline", "x = 1"});
    PythonSource src = nb::normalize_cell_source(cell);
    CHECK(src.text == "\nx = 1");
    CHECK(src.suppressed_lines == std::set<int>{1});

    nb::Notebook doc = load("magics.ipynb");
    REQUIRE(doc.cells.size() == 3);

    PythonSource first = nb::normalize_cell_source(doc.cells[0]);
    CHECK(first.text == "\nimport numpy as np\n\n\nx = np.arange(5)");
    CHECK(first.suppressed_lines == std::set<int>{1, 3, 4});

    // An indented magic still counts; ordinary code on the next line stays.
    PythonSource third = nb::normalize_cell_source(doc.cells[2]);
    CHECK(third.text == "\ny = x * 2");
    CHECK(third.suppressed_lines == std::set<int>{1});

    // Help queries must not swallow ordinary strings ending in '?'.
    PythonSource ask = nb::normalize_cell_source(code_cell({"df.describe?", "s = 'is he?'"}));
    CHECK(ask.text == "\ns = 'is he?'");
    CHECK(ask.suppressed_lines == std::set<int>{1});
}

TEST_CASE("a leading cell magic suppresses the whole cell") {
    nb::Cell cell = code_cell({"%%bash", "ls"});
    PythonSource src = nb::normalize_cell_source(cell);
    CHECK(src.text == "\n\n");
    CHECK(src.suppressed_lines == std::set<int>{1, 2});

    nb::Notebook doc = load("magics.ipynb");
    PythonSource bash = nb::normalize_cell_source(doc.cells[1]);
    CHECK(bash.text == "\n\n\n");
    CHECK(bash.suppressed_lines == std::set<int>{1, 2, 3});
}

TEST_CASE("plain cells pass through unchanged with an identity line map") {
    nb::Cell cell = code_cell({"x = 1"}, 4);
    PythonSource src = nb::normalize_cell_source(cell);
    CHECK(src.text == "x = 1");
    CHECK(src.suppressed_lines.empty());
    REQUIRE(src.line_map.size() == 1);
    CHECK(src.line_map[0].cell_index == 4);
    CHECK(src.line_map[0].original_line == 1);

    nb::Cell multi = code_cell({"a = 1", "", "b = 2"}, 2);
    PythonSource multi_src = nb::normalize_cell_source(multi);
    CHECK(multi_src.text == "a = 1\n\nb = 2");
    REQUIRE(multi_src.line_map.size() == 3);
    for (size_t i = 0; i < multi_src.line_map.size(); ++i) {
        CHECK(multi_src.line_map[i].cell_index == 2);
        CHECK(multi_src.line_map[i].original_line == static_cast<int>(i) + 1);
    }
}

TEST_CASE("normalization preserves line counts and is idempotent on its own output") {
    // Plain split on every '\n', keeping the segment after a final newline.
    // Under this lift any text with k newlines becomes k+1 lines, so
    // re-joining reproduces the text exactly when nothing else changes.
    auto split_all = [](const std::string& text) {
        std::vector<std::string> lines{""};
        for (char c : text) {
            if (c == '\n')
                lines.emplace_back();
            else
                lines.back() += c;
        }
        return lines;
    };

    for (const char* name : {"magics.ipynb", "basic_v4.ipynb", "legacy_v3.ipynb"}) {
        CAPTURE(name);
        nb::Notebook doc = load(name);
        for (const auto& cell : doc.cells) {
            if (cell.kind != nb::CellKind::code) continue;
            CAPTURE(cell.index_in_document);
            PythonSource once = nb::normalize_cell_source(cell);
            REQUIRE(once.line_map.size() == cell.source_lines.size());

            // Feed the normalized text back through as a fresh cell: nothing
            // further to strip, so the text reaches a fixed point.
            nb::Cell again = cell;
            again.source_lines = split_all(once.text);
            PythonSource twice = nb::normalize_cell_source(again);
            CHECK(twice.text == once.text);
            CHECK(twice.suppressed_lines.empty());
        }
    }
}

TEST_CASE("markdown attaches to the next code cell; trailing markdown to the last") {
    nb::Notebook doc = load("basic_v4.ipynb");
    nb::CellChain chain = nb::build_cell_chain(doc);

    CHECK(chain.notebook_path == "basic_v4.ipynb");
    REQUIRE(chain.entries.size() == 3);

    CHECK(chain.entries[0].code_cell.index_in_document == 1);
    REQUIRE(chain.entries[0].preceding_markdown.size() == 1);
    CHECK(chain.entries[0].preceding_markdown[0].index_in_document == 0);

    CHECK(chain.entries[1].code_cell.index_in_document == 3);
    REQUIRE(chain.entries[1].preceding_markdown.size() == 1);
    CHECK(chain.entries[1].preceding_markdown[0].index_in_document == 2);

    // Raw cell is ignored; the empty trailing code cell gets no markdown.
    CHECK(chain.entries[2].code_cell.index_in_document == 5);
    CHECK(chain.entries[2].preceding_markdown.empty());

    CHECK(chain.counts.n_code_cells == 3);
    CHECK(chain.counts.n_markdown_cells == 2);
    CHECK(chain.counts.total_loc == 4);
}

TEST_CASE("trailing markdown after the final code cell still lands somewhere") {
    const std::string doc_json =
        "{\"cells\": ["
        "{\"cell_type\": \"markdown\", \"metadata\": {}, \"source\": [\"A\"]},"
        "{\"cell_type\": \"code\", \"execution_count\": null, \"metadata\": {},"
        " \"outputs\": [], \"source\": [\"x = 1\"]},"
        "{\"cell_type\": \"code\", \"execution_count\": null, \"metadata\": {},"
        " \"outputs\": [], \"source\": [\"y = 2\"]},"
        "{\"cell_type\": \"markdown\", \"metadata\": {}, \"source\": [\"B\"]}"
        "], \"nbformat\": 4, \"nbformat_minor\": 5, \"metadata\": {}}";
    nb::CellChain chain = nb::build_cell_chain(nb::parse_notebook(doc_json, "t"));

    REQUIRE(chain.entries.size() == 2);
    REQUIRE(chain.entries[0].preceding_markdown.size() == 1);
    CHECK(chain.entries[0].preceding_markdown[0].source_lines ==
          std::vector<std::string>{"A"});
    // B trails the last code cell and attaches to it.
    REQUIRE(chain.entries[1].preceding_markdown.size() == 1);
    CHECK(chain.entries[1].preceding_markdown[0].source_lines ==
          std::vector<std::string>{"B"});
}

TEST_CASE("a notebook with no code cells yields one synthetic entry") {
    nb::CellChain chain = nb::build_cell_chain(load("markdown_only.ipynb"));

    REQUIRE(chain.entries.size() == 1);
    CHECK(chain.entries[0].code_cell.index_in_document == -1);
    CHECK(chain.entries[0].code_cell.source_lines.empty());
    CHECK(chain.entries[0].preceding_markdown.size() == 2);
    CHECK(chain.entries[0].normalized_source.text.empty());
    CHECK(chain.counts.n_code_cells == 0);
    CHECK(chain.counts.n_markdown_cells == 2);
    CHECK(chain.counts.total_loc == 0);

    // A fully empty notebook has nothing to attach, so the synthetic entry
    // carries no markdown either.
    nb::CellChain empty_chain = nb::build_cell_chain(load("empty.ipynb"));
    REQUIRE(empty_chain.entries.size() == 1);
    CHECK(empty_chain.entries[0].code_cell.index_in_document == -1);
    CHECK(empty_chain.entries[0].preceding_markdown.empty());
    CHECK(empty_chain.counts.total_loc == 0);
}

TEST_CASE("total lines of code counts non-blank normalized lines") {
    const std::string doc_json =
        "{\"cells\": ["
        "{\"cell_type\": \"code\", \"execution_count\": null, \"metadata\": {},"
        " \"outputs\": [], \"source\": [\"a = 1\\n\", \"b = 2\"]},"
        "{\"cell_type\": \"code\", \"execution_count\": null, \"metadata\": {},"
        " \"outputs\": [], \"source\": []},"
        "{\"cell_type\": \"code\", \"execution_count\": null, \"metadata\": {},"
        " \"outputs\": [], \"source\":"
        " [\"def f():\\n\", \"    return 1\\n\", \"\\n\", \"c = f()\\n\", \"d = c + 1\\n\","
        " \"print(d)\"]}"
        "], \"nbformat\": 4, \"nbformat_minor\": 5, \"metadata\": {}}";
    nb::CellChain chain = nb::build_cell_chain(nb::parse_notebook(doc_json, "t"));

    REQUIRE(chain.entries.size() == 3);
    CHECK(chain.counts.total_loc == 7);  // 2 + 0 + 5; the blank line is excluded

    // Suppressed interactive lines become blank and drop out of the count.
    const std::string magic_json =
        "{\"cells\": ["
        "{\"cell_type\": \"code\", \"execution_count\": null, \"metadata\": {},"
        " \"outputs\": [], \"source\": [\"%matplotlib inline\\n\", \"x = 1\"]}"
        "], \"nbformat\": 4, \"nbformat_minor\": 5, \"metadata\": {}}";
    nb::CellChain magic_chain = nb::build_cell_chain(nb::parse_notebook(magic_json, "t"));
    CHECK(magic_chain.counts.total_loc == 1);
}

TEST_CASE("chain accounting is complete over every fixture") {
    for (const char* name :
         {"basic_v4.ipynb", "magics.ipynb", "legacy_v3.ipynb", "markdown_only.ipynb",
          "crlf_cells.ipynb", "empty.ipynb"}) {
        CAPTURE(name);
        nb::Notebook doc = load(name);
        nb::CellChain chain = nb::build_cell_chain(doc);

        int raw_cells = 0;
        for (const auto& cell : doc.cells)
            if (cell.kind == nb::CellKind::raw) ++raw_cells;
        CHECK(chain.counts.n_code_cells + chain.counts.n_markdown_cells + raw_cells ==
              static_cast<int>(doc.cells.size()));

        // Entries appear in document order and markdown is never duplicated.
        std::set<int> seen;
        int last_index = -1;
        for (const auto& entry : chain.entries) {
            if (entry.code_cell.index_in_document >= 0) {
                CHECK(entry.code_cell.index_in_document > last_index);
                last_index = entry.code_cell.index_in_document;
            }
            for (const auto& md : entry.preceding_markdown)
                CHECK(seen.insert(md.index_in_document).second);
        }
        CHECK(static_cast<int>(seen.size()) == chain.counts.n_markdown_cells);
    }
}

TEST_CASE("script discovery finds .py files, skips hidden directories, sorts") {
    std::vector<std::string> warnings;
    std::vector<nb::ExternalScript> scripts = nb::discover_external_scripts(kProject, warnings);

    CHECK(warnings.empty());
    REQUIRE(scripts.size() == 3);
    CHECK(scripts[0].path.filename() == "helpers.py");
    CHECK(scripts[1].path.filename() == "windows_style.py");
    CHECK(scripts[2].path.filename() == "util.py");

    // Sorted by full path: lib/* precedes util.py.
    CHECK(std::is_sorted(scripts.begin(), scripts.end(),
                         [](const auto& a, const auto& b) { return a.path < b.path; }));

    // Hidden directories (checkpoints and the like) contribute nothing.
    for (const auto& s : scripts) {
        const std::string p = s.path.generic_string();
        CHECK(p.find("/.") == std::string::npos);
        CHECK(p.find(".ipynb_checkpoints") == std::string::npos);
    }

    // Windows line endings are normalized away; identity map; LOC counted.
    const nb::ExternalScript& win = scripts[1];
    CHECK(win.source.text == "line_a = 1\nline_b = 2\n");
    CHECK(win.loc == 2);
    REQUIRE(win.source.line_map.size() >= 2);
    CHECK(win.source.line_map[0].original_line == 1);
    CHECK(win.source.line_map[1].original_line == 2);

    const nb::ExternalScript& helpers = scripts[0];
    CHECK(helpers.loc == 3);  // import + def + return; blank lines excluded
}

TEST_CASE("script discovery handles empty and missing roots gracefully") {
    const fs::path scratch = fs::temp_directory_path() / "nblint_empty_discovery";
    fs::create_directories(scratch);
    CHECK(nb::discover_external_scripts(scratch).empty());
    fs::remove_all(scratch);

    std::vector<std::string> warnings;
    std::vector<nb::ExternalScript> none =
        nb::discover_external_scripts(scratch / "does_not_exist", warnings);
    CHECK(none.empty());
}
