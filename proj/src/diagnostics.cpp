#include "nblint/diagnostics.hpp"

#include <algorithm>
#include <tuple>

namespace nblint {

const char* to_string(Category c) {
    switch (c) {
        case Category::style: return "style";
        case Category::unused: return "unused";
        case Category::deprecated: return "deprecated";
        case Category::analysis: return "analysis";
    }
    return "style";
}

const char* to_string(Severity s) {
    return s == Severity::error ? "error" : "warning";
}

Severity derive_severity(const std::string& code, Category category) {
    if (category != Category::style) return Severity::warning;
    if (!code.empty() && code[0] == 'W') return Severity::warning;
    return Severity::error;
}

Diagnostic make_diagnostic(std::string code, std::string message, std::string path,
                           std::optional<int> cell_index, int line, int column,
                           Category category) {
    Diagnostic d;
    d.severity = derive_severity(code, category);
    d.code = std::move(code);
    d.message = std::move(message);
    d.path = std::move(path);
    d.cell_index = cell_index;
    d.line = line;
    d.column = column;
    d.category = category;
    return d;
}

bool diagnostic_before(const Diagnostic& a, const Diagnostic& b) {
    const int ac = a.cell_index.value_or(-1);
    const int bc = b.cell_index.value_or(-1);
    return std::tie(ac, a.line, a.column, a.code) < std::tie(bc, b.line, b.column, b.code);
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
    std::stable_sort(diags.begin(), diags.end(), diagnostic_before);
}

}  // namespace nblint
