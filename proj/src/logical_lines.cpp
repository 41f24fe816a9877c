#include "nblint/logical_lines.hpp"

#include <algorithm>

#include "nblint/text.hpp"

namespace nblint::py {

namespace {

bool is_skip_token(TokenKind k) {
    return k == TokenKind::newline || k == TokenKind::nl || k == TokenKind::indent ||
           k == TokenKind::dedent;
}

bool contains_char(std::u32string_view set, char32_t c) {
    return set.find(c) != std::u32string_view::npos;
}

// Python-style substring membership: true when `text` occurs inside `s`
// (the empty string always does).
bool is_substring(const std::u32string& text, std::u32string_view s) {
    if (text.empty()) return true;
    return s.find(text) != std::u32string_view::npos;
}

// The raw source character sitting at (row, col) within a token's own
// physical line(s); used to decide padding when joining across a line break.
char32_t char_on_token_line(const Token& tok, int row, int col) {
    if (col < 0) return U'\0';
    std::u32string_view line = tok.line;
    if (tok.start.line != tok.end.line) {
        auto segments = text::split_lines_keepends(tok.line);
        int idx = row - tok.start.line;
        if (idx < 0 || idx >= static_cast<int>(segments.size())) return U'\0';
        if (col >= static_cast<int>(segments[idx].size())) return U'\0';
        return segments[idx][col];
    }
    if (col >= static_cast<int>(line.size())) return U'\0';
    return line[col];
}

}  // namespace

std::u32string mute_string(const std::u32string& text) {
    if (text.empty()) return text;
    size_t start = text.find(text.back()) + 1;
    size_t end = text.size() - 1;
    if (text.size() >= 3) {
        std::u32string last3 = text.substr(text.size() - 3);
        if (last3 == U"\"\"\"" || last3 == U"'''") {
            start += 2;
            end -= 2;
        }
    }
    if (end < start) return text;
    return text.substr(0, start) + std::u32string(end - start, U'x') + text.substr(end);
}

JoinedText join_logical(const std::vector<Token>& group) {
    JoinedText out;
    bool have_prev = false;
    int prev_row = 0;
    int prev_col = 0;
    const Token* prev_tok = nullptr;
    int length = 0;
    for (const Token& tok : group) {
        if (is_skip_token(tok.kind)) continue;
        if (out.offset_map.empty()) out.offset_map.emplace_back(0, tok.start);
        if (tok.kind == TokenKind::comment) continue;
        std::u32string text = tok.text;
        if (tok.kind == TokenKind::string) text = mute_string(text);
        if (have_prev) {
            if (prev_row != tok.start.line) {
                char32_t prev_char = char_on_token_line(*prev_tok, prev_row, prev_col - 1);
                if (prev_char == U',' ||
                    (!contains_char(U"{[(", prev_char) && !is_substring(text, U"}])"))) {
                    text = U" " + text;
                }
            } else if (prev_col != tok.start.col) {
                text = tok.line.substr(prev_col, tok.start.col - prev_col) + text;
            }
        }
        out.text += text;
        length += static_cast<int>(text.size());
        out.offset_map.emplace_back(length, tok.end);
        have_prev = true;
        prev_row = tok.end.line;
        prev_col = tok.end.col;
        prev_tok = &tok;
    }
    return out;
}

Pos map_logical_offset(const std::vector<std::pair<int, Pos>>& offset_map, int offset) {
    auto it = std::lower_bound(offset_map.begin(), offset_map.end(), offset,
                               [](const std::pair<int, Pos>& e, int v) { return e.first < v; });
    if (it == offset_map.end()) it = offset_map.end() - 1;
    return Pos{it->second.line, it->second.col + offset - it->first};
}

std::vector<LogicalLine> logical_lines(const std::vector<Token>& tokens) {
    std::vector<LogicalLine> out;
    std::vector<Token> group;
    int parens = 0;

    auto flush = [&]() {
        if (group.empty()) return;
        JoinedText joined = join_logical(group);
        if (!joined.text.empty()) {
            LogicalLine ll;
            ll.tokens = group;
            ll.first_line = group.front().start.line;
            ll.last_line = group.front().end.line;
            int depth = 0;
            for (const Token& tok : group) {
                ll.last_line = std::max(ll.last_line, tok.end.line);
                if (tok.kind == TokenKind::op && tok.text.size() == 1) {
                    if (contains_char(U"([{", tok.text[0]))
                        ++depth;
                    else if (contains_char(U")]}", tok.text[0]))
                        --depth;
                }
                ll.bracket_depths.push_back(depth);
            }
            ll.text = std::move(joined.text);
            ll.offset_map = std::move(joined.offset_map);
            out.push_back(std::move(ll));
        }
        group.clear();
    };

    for (const Token& tok : tokens) {
        group.push_back(tok);
        if (tok.kind == TokenKind::op && tok.text.size() == 1 &&
            contains_char(U"([{)]}", tok.text[0])) {
            parens += contains_char(U"([{", tok.text[0]) ? 1 : -1;
        } else if (parens == 0 &&
                   (tok.kind == TokenKind::newline || tok.kind == TokenKind::nl)) {
            if (tok.kind == TokenKind::nl && group.size() == 1) {
                group.clear();  // blank physical line
            } else {
                flush();
            }
        }
    }
    flush();
    return out;
}

}  // namespace nblint::py
