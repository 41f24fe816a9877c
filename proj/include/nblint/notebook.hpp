#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nblint/source.hpp"

namespace nblint::nb {

// ---------------------------------------------------------------------------
// Document model.

enum class CellKind { code, markdown, raw };

const char* to_string(CellKind kind);

struct Cell {
    CellKind kind = CellKind::code;
    // Newline-normalized content: one entry per line, no trailing newline
    // characters and no carriage returns.
    std::vector<std::string> source_lines;
    std::optional<int> execution_count;  // code cells only; absent when null
    int index_in_document = 0;           // 0-based position within the document
};

struct Notebook {
    std::string path;
    int format_major = 4;
    int format_minor = 0;
    std::vector<Cell> cells;  // document order
    // Language declared by the document metadata; empty when the document
    // does not declare one (treated as Python).
    std::string metadata_language;
};

// ---------------------------------------------------------------------------
// Parse failures. All derive from NotebookError so callers can catch broadly.

class NotebookError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The bytes are not a structurally valid notebook document.
class MalformedDocument : public NotebookError {
public:
    using NotebookError::NotebookError;
};

// The document declares a format major version this tool does not read.
class UnsupportedVersion : public NotebookError {
public:
    UnsupportedVersion(const std::string& message, int major_version)
        : NotebookError(message), major(major_version) {}
    int major;
};

// The document metadata declares a non-Python kernel. Callers may opt to
// force-proceed via ParseOptions::force_language.
class NonPythonNotebook : public NotebookError {
public:
    NonPythonNotebook(const std::string& message, std::string declared)
        : NotebookError(message), language(std::move(declared)) {}
    std::string language;
};

struct ParseOptions {
    bool force_language = false;  // accept documents declaring a non-Python kernel
};

// Parse raw notebook bytes (JSON, format major versions 3 and 4). Version 3
// documents are mapped into the version 4 cell model: worksheets are
// flattened in order and heading cells become markdown.
Notebook parse_notebook(const std::string& raw_bytes, const std::string& path = "",
                        const ParseOptions& options = {});

// ---------------------------------------------------------------------------
// Cell-source normalization.

struct NormalizationConfig {
    // Replace interactive-shell syntax (line magics, shell escapes, help
    // queries, cell magics) with blank suppressed lines.
    bool suppress_ipython_syntax = true;
};

// Turn a code cell into analyzable Python text. Line count is preserved so
// downstream positions stay valid: suppressed lines become empty and are
// recorded in PythonSource::suppressed_lines (1-based). A leading cell magic
// (first line starting with "%%") suppresses the entire cell body.
PythonSource normalize_cell_source(const Cell& cell, const NormalizationConfig& config = {});

// ---------------------------------------------------------------------------
// Cell chain: code cells in document order with their explanatory context.

struct ChainEntry {
    Cell code_cell;
    std::vector<Cell> preceding_markdown;
    PythonSource normalized_source;
};

struct ChainCounts {
    int n_code_cells = 0;
    int n_markdown_cells = 0;
    int total_loc = 0;  // non-blank normalized code lines
};

struct CellChain {
    std::string notebook_path;
    std::vector<ChainEntry> entries;
    ChainCounts counts;
};

// Build the chain: code cells in document order, each carrying the markdown
// cells since the previous code cell. Trailing markdown attaches to the last
// entry; a notebook with no code cells yields one synthetic empty entry
// (code_cell.index_in_document == -1) holding all markdown cells.
CellChain build_cell_chain(const Notebook& notebook, const NormalizationConfig& config = {});

// ---------------------------------------------------------------------------
// External scripts living next to notebooks.

struct ExternalScript {
    std::filesystem::path path;
    PythonSource source;  // identity line map
    int loc = 0;          // non-blank lines
};

// Recursively collect *.py files under root, skipping hidden directories
// (which covers .ipynb_checkpoints and version-control internals). Results
// are sorted by path. Unreadable files are reported through `warnings`
// rather than aborting the walk.
std::vector<ExternalScript> discover_external_scripts(const std::filesystem::path& root,
                                                      std::vector<std::string>& warnings);
std::vector<ExternalScript> discover_external_scripts(const std::filesystem::path& root);

}  // namespace nblint::nb
