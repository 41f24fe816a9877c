#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nblint {

enum class Category { style, unused, deprecated, analysis };
enum class Severity { error, warning };

const char* to_string(Category c);
const char* to_string(Severity s);

// One finding. `line`/`column` are 1-based. For notebook sources `cell_index`
// is the 0-based code-cell position in the document and `line` is relative to
// that cell's source.
struct Diagnostic {
    std::string code;
    std::string message;
    std::string path;
    std::optional<int> cell_index;
    int line = 1;
    int column = 1;
    Category category = Category::style;
    Severity severity = Severity::error;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Severity is derived, never stored independently: warnings are the W-codes
// and every non-style category.
Severity derive_severity(const std::string& code, Category category);

Diagnostic make_diagnostic(std::string code, std::string message, std::string path,
                           std::optional<int> cell_index, int line, int column,
                           Category category);

// Orders by (cell, line, column, code) — the emission order everywhere.
bool diagnostic_before(const Diagnostic& a, const Diagnostic& b);
void sort_diagnostics(std::vector<Diagnostic>& diags);

}  // namespace nblint
