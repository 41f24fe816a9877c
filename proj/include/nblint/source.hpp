#pragma once

#include <set>
#include <string>
#include <vector>

namespace nblint {

// Where a normalized line came from: which cell and which 1-based line of
// that cell's original source.
struct LineOrigin {
    int cell_index = 0;
    int original_line = 1;

    friend bool operator==(const LineOrigin&, const LineOrigin&) = default;
};

// A unit of analyzable Python text. For scripts the line map is the identity;
// for notebook cells it points back into the cell. `suppressed_lines` holds
// 1-based numbers of lines that normalization blanked out (magics, shell
// escapes, help queries): they produce no diagnostics and do not count as
// blank separators for blank-line-structure rules.
struct PythonSource {
    std::string text;
    std::vector<LineOrigin> line_map;  // line_map[i] describes line i+1
    std::set<int> suppressed_lines;

    static PythonSource from_text(std::string text, int cell_index = 0);

    bool is_suppressed(int line) const { return suppressed_lines.count(line) > 0; }
    int line_count() const { return static_cast<int>(line_map.size()); }
};

}  // namespace nblint
