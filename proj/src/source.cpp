#include "nblint/source.hpp"

namespace nblint {

PythonSource PythonSource::from_text(std::string text, int cell_index) {
    PythonSource src;
    src.text = std::move(text);
    int n_lines = 0;
    bool at_line_start = true;
    for (char c : src.text) {
        if (at_line_start) {
            ++n_lines;
            at_line_start = false;
        }
        if (c == '\n') at_line_start = true;
    }
    src.line_map.reserve(n_lines);
    for (int i = 0; i < n_lines; ++i) src.line_map.push_back({cell_index, i + 1});
    return src;
}

}  // namespace nblint
