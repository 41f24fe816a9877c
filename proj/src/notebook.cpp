#include "nblint/notebook.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nblint::nb {
namespace {

using nlohmann::json;

const char* kAsciiBlank = " \t\f\v";

std::string ascii_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Join a notebook source value (string or list of strings), drop carriage
// returns, and split into lines without trailing newlines.
std::vector<std::string> normalize_source_lines(const json& value) {
    std::string text;
    if (value.is_string()) {
        text = value.get<std::string>();
    } else if (value.is_array()) {
        for (const auto& piece : value) {
            if (!piece.is_string())
                throw MalformedDocument("cell source list contains a non-string entry");
            text += piece.get<std::string>();
        }
    } else if (!value.is_null()) {
        throw MalformedDocument("cell source is neither a string nor a list of strings");
    }
    text.erase(std::remove(text.begin(), text.end(), '\r'), text.end());

    std::vector<std::string> lines;
    if (text.empty()) return lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
        if (start == text.size()) break;  // trailing newline: no extra empty line
    }
    return lines;
}

std::optional<int> read_execution_count(const json& cell, const char* key) {
    if (!cell.contains(key)) return std::nullopt;
    const json& v = cell.at(key);
    if (!v.is_number_integer()) return std::nullopt;
    const auto n = v.get<long long>();
    if (n < 0) return std::nullopt;
    return static_cast<int>(n);
}

Cell parse_cell(const json& raw, int index, int format_major) {
    if (!raw.is_object()) throw MalformedDocument("cell entry is not an object");
    if (!raw.contains("cell_type") || !raw.at("cell_type").is_string())
        throw MalformedDocument("cell has no cell_type");
    const std::string type = raw.at("cell_type").get<std::string>();

    Cell cell;
    cell.index_in_document = index;
    if (type == "code") {
        cell.kind = CellKind::code;
    } else if (type == "markdown" || type == "heading") {
        cell.kind = CellKind::markdown;
    } else {
        cell.kind = CellKind::raw;
    }

    const char* source_key = "source";
    if (format_major == 3 && cell.kind == CellKind::code) source_key = "input";
    if (raw.contains(source_key)) {
        cell.source_lines = normalize_source_lines(raw.at(source_key));
    }

    if (cell.kind == CellKind::code) {
        cell.execution_count = read_execution_count(
            raw, format_major == 3 ? "prompt_number" : "execution_count");
    }
    return cell;
}

std::string declared_language(const json& doc) {
    if (!doc.contains("metadata") || !doc.at("metadata").is_object()) return "";
    const json& meta = doc.at("metadata");
    if (meta.contains("kernelspec") && meta.at("kernelspec").is_object()) {
        const json& spec = meta.at("kernelspec");
        if (spec.contains("language") && spec.at("language").is_string())
            return spec.at("language").get<std::string>();
    }
    if (meta.contains("language_info") && meta.at("language_info").is_object()) {
        const json& info = meta.at("language_info");
        if (info.contains("name") && info.at("name").is_string())
            return info.at("name").get<std::string>();
    }
    if (meta.contains("language") && meta.at("language").is_string())
        return meta.at("language").get<std::string>();
    return "";
}

// Interactive-shell lines that are not Python: line magics, shell escapes,
// and help queries. Help queries are only recognized on lines that are a
// simple dotted/indexed name plus the question marks, so that legitimate
// Python containing '?' inside strings is left alone.
bool is_interactive_line(const std::string& line) {
    const size_t first = line.find_first_not_of(kAsciiBlank);
    if (first == std::string::npos) return false;
    const char head = line[first];
    if (head == '%' || head == '!' || head == '?') return true;

    size_t last = line.find_last_not_of(kAsciiBlank);
    if (line[last] != '?') return false;
    while (last > first && line[last] == '?') --last;
    if (line[last] == '?') return false;  // only question marks
    for (size_t i = first; i <= last; ++i) {
        const unsigned char c = static_cast<unsigned char>(line[i]);
        if (!(std::isalnum(c) || c == '_' || c == '.' || c == '[' || c == ']' ||
              c == '\'' || c == '"'))
            return false;
    }
    return true;
}

int count_loc(const PythonSource& src) {
    int loc = 0;
    size_t start = 0;
    const std::string& text = src.text;
    while (start < text.size()) {
        size_t nl = text.find('\n', start);
        const size_t end = nl == std::string::npos ? text.size() : nl;
        std::string_view line(text.data() + start, end - start);
        if (line.find_first_not_of(kAsciiBlank) != std::string_view::npos) ++loc;
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    return loc;
}

void walk_scripts(const std::filesystem::path& dir, std::vector<ExternalScript>& out,
                  std::vector<std::string>& warnings) {
    std::error_code ec;
    std::vector<std::filesystem::directory_entry> entries;
    for (std::filesystem::directory_iterator it(dir, ec), end; !ec && it != end;
         it.increment(ec)) {
        entries.push_back(*it);
    }
    if (ec) {
        warnings.push_back("cannot list " + dir.string() + ": " + ec.message());
        return;
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.path() < b.path(); });
    for (const auto& entry : entries) {
        const std::string name = entry.path().filename().string();
        if (entry.is_directory()) {
            if (!name.empty() && name[0] == '.') continue;  // hidden (incl. checkpoints)
            walk_scripts(entry.path(), out, warnings);
            continue;
        }
        if (!entry.is_regular_file() || entry.path().extension() != ".py") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        if (!in) {
            warnings.push_back("cannot read " + entry.path().string());
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string content = buf.str();
        // Universal-newline normalization: scripts saved with CRLF otherwise
        // trip whitespace rules on every line.
        std::string normalized;
        normalized.reserve(content.size());
        for (size_t i = 0; i < content.size(); ++i) {
            if (content[i] == '\r') {
                normalized += '\n';
                if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
            } else {
                normalized += content[i];
            }
        }
        ExternalScript script;
        script.path = entry.path();
        script.source = PythonSource::from_text(std::move(normalized));
        script.loc = count_loc(script.source);
        out.push_back(std::move(script));
    }
}

}  // namespace

const char* to_string(CellKind kind) {
    switch (kind) {
        case CellKind::code: return "code";
        case CellKind::markdown: return "markdown";
        case CellKind::raw: return "raw";
    }
    return "code";
}

Notebook parse_notebook(const std::string& raw_bytes, const std::string& path,
                        const ParseOptions& options) {
    const json doc = json::parse(raw_bytes, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object())
        throw MalformedDocument("not a notebook document (invalid JSON)");

    if (!doc.contains("nbformat") || !doc.at("nbformat").is_number_integer())
        throw MalformedDocument("missing nbformat version field");
    const long long major_wide = doc.at("nbformat").get<long long>();
    int minor = 0;
    if (doc.contains("nbformat_minor") && doc.at("nbformat_minor").is_number_integer())
        minor = static_cast<int>(doc.at("nbformat_minor").get<long long>());
    if (major_wide != 3 && major_wide != 4)
        throw UnsupportedVersion("unsupported notebook format version " +
                                     std::to_string(major_wide),
                                 static_cast<int>(std::clamp<long long>(major_wide, -1, 1000)));
    const int major = static_cast<int>(major_wide);

    Notebook notebook;
    notebook.path = path;
    notebook.format_major = major;
    notebook.format_minor = minor;
    notebook.metadata_language = declared_language(doc);

    if (!notebook.metadata_language.empty() && !options.force_language) {
        const std::string lower = ascii_lower(notebook.metadata_language);
        if (lower.rfind("python", 0) != 0)
            throw NonPythonNotebook("notebook declares non-Python language '" +
                                        notebook.metadata_language + "'",
                                    notebook.metadata_language);
    }

    int index = 0;
    if (major == 4) {
        if (!doc.contains("cells") || !doc.at("cells").is_array())
            throw MalformedDocument("notebook has no cells array");
        for (const json& raw : doc.at("cells"))
            notebook.cells.push_back(parse_cell(raw, index++, major));
    } else {
        if (!doc.contains("worksheets") || !doc.at("worksheets").is_array())
            throw MalformedDocument("notebook has no worksheets array");
        for (const json& sheet : doc.at("worksheets")) {
            if (!sheet.is_object() || !sheet.contains("cells") ||
                !sheet.at("cells").is_array())
                throw MalformedDocument("worksheet has no cells array");
            for (const json& raw : sheet.at("cells"))
                notebook.cells.push_back(parse_cell(raw, index++, major));
        }
    }
    return notebook;
}

PythonSource normalize_cell_source(const Cell& cell, const NormalizationConfig& config) {
    const std::vector<std::string>& lines = cell.source_lines;
    const int n = static_cast<int>(lines.size());

    PythonSource out;
    out.line_map.reserve(lines.size());
    for (int i = 0; i < n; ++i) out.line_map.push_back({cell.index_in_document, i + 1});

    const bool suppress = config.suppress_ipython_syntax;
    if (suppress && n > 0) {
        const size_t first = lines[0].find_first_not_of(kAsciiBlank);
        if (first != std::string::npos && lines[0].compare(first, 2, "%%") == 0) {
            // Cell magic: the whole body is in another language.
            out.text.assign(static_cast<size_t>(n), '\n');
            for (int i = 1; i <= n; ++i) out.suppressed_lines.insert(i);
            return out;
        }
    }

    for (int i = 0; i < n; ++i) {
        if (i > 0) out.text += '\n';
        if (suppress && is_interactive_line(lines[i])) {
            out.suppressed_lines.insert(i + 1);
        } else {
            out.text += lines[i];
        }
    }
    return out;
}

CellChain build_cell_chain(const Notebook& notebook, const NormalizationConfig& config) {
    CellChain chain;
    chain.notebook_path = notebook.path;

    std::vector<Cell> pending_markdown;
    for (const Cell& cell : notebook.cells) {
        if (cell.kind == CellKind::markdown) {
            ++chain.counts.n_markdown_cells;
            pending_markdown.push_back(cell);
            continue;
        }
        if (cell.kind != CellKind::code) continue;  // raw cells are ignored
        ChainEntry entry;
        entry.code_cell = cell;
        entry.preceding_markdown = std::move(pending_markdown);
        pending_markdown.clear();
        entry.normalized_source = normalize_cell_source(cell, config);
        chain.counts.total_loc += count_loc(entry.normalized_source);
        ++chain.counts.n_code_cells;
        chain.entries.push_back(std::move(entry));
    }

    if (chain.entries.empty()) {
        // No code cells at all: one synthetic empty entry so the document
        // still appears in the chain, holding whatever markdown it had.
        ChainEntry synthetic;
        synthetic.code_cell.kind = CellKind::code;
        synthetic.code_cell.index_in_document = -1;
        synthetic.preceding_markdown = std::move(pending_markdown);
        chain.entries.push_back(std::move(synthetic));
    } else if (!pending_markdown.empty()) {
        auto& tail = chain.entries.back().preceding_markdown;
        for (auto& md : pending_markdown) tail.push_back(std::move(md));
    }
    return chain;
}

std::vector<ExternalScript> discover_external_scripts(const std::filesystem::path& root,
                                                      std::vector<std::string>& warnings) {
    std::vector<ExternalScript> scripts;
    std::error_code ec;
    if (!std::filesystem::is_directory(root, ec)) {
        warnings.push_back("not a directory: " + root.string());
        return scripts;
    }
    walk_scripts(root, scripts, warnings);
    std::sort(scripts.begin(), scripts.end(),
              [](const ExternalScript& a, const ExternalScript& b) { return a.path < b.path; });
    return scripts;
}

std::vector<ExternalScript> discover_external_scripts(const std::filesystem::path& root) {
    std::vector<std::string> warnings;
    return discover_external_scripts(root, warnings);
}

}  // namespace nblint::nb
