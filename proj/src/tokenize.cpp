#include "nblint/tokenize.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

#include "nblint/chartables.hpp"
#include "nblint/text.hpp"

namespace nblint::py {

namespace {

constexpr size_t npos = static_cast<size_t>(-1);
constexpr int kTabSize = 8;

bool is_ascii_letter(char32_t c) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

// A name scans as a maximal run of word characters; whether the run is a
// NAME or an operator-like leftover depends on its first character.
bool is_word_char(char32_t c) { return text::is_word_codepoint(c); }

bool is_identifier_start(char32_t c) { return text::is_identifier_start_codepoint(c); }

char32_t to_lower_ascii(char32_t c) {
    return (c >= U'A' && c <= U'Z') ? c + (U'a' - U'A') : c;
}

// One- or two-letter string prefixes: any casing of b, r, u, f, br, rb, fr, rf.
bool is_string_prefix(std::u32string_view letters) {
    if (letters.empty()) return true;
    if (letters.size() > 2) return false;
    std::u32string low;
    for (char32_t c : letters) low.push_back(to_lower_ascii(c));
    if (low.size() == 1) return low == U"b" || low == U"r" || low == U"u" || low == U"f";
    return low == U"br" || low == U"rb" || low == U"fr" || low == U"rf";
}

// Multi-character operators, longest first; single chars checked after.
// A lone '!' is not an operator (only '!=' is).
constexpr std::array<std::u32string_view, 5> kOps3 = {U"**=", U"//=", U">>=", U"<<=", U"..."};
constexpr std::array<std::u32string_view, 19> kOps2 = {
    U"==", U"!=", U"<=", U">=", U"**", U"//", U">>", U"<<", U"->", U"+=",
    U"-=", U"*=", U"/=", U"%=", U"&=", U"|=", U"^=", U"@=", U":=",
};
constexpr std::u32string_view kSingleOps = U"~}|{^][@>=<;:/.-,+*)('&%";

size_t match_operator(const std::u32string& line, size_t pos) {
    const size_t n = line.size();
    auto has = [&](std::u32string_view op) {
        return pos + op.size() <= n && std::u32string_view(line).substr(pos, op.size()) == op;
    };
    for (auto op : kOps3)
        if (has(op)) return 3;
    for (auto op : kOps2)
        if (has(op)) return 2;
    if (kSingleOps.find(line[pos]) != std::u32string_view::npos) return 1;
    return 0;
}

// --- number scanning (ports the reference tokenizer's regex alternation) ---

// [0-9](?:_?[0-9])*  — returns end, or `i` when no digits.
size_t match_digit_run(const std::u32string& s, size_t i) {
    if (i >= s.size() || !is_digit(s[i])) return i;
    ++i;
    while (i < s.size()) {
        if (is_digit(s[i])) {
            ++i;
        } else if (s[i] == U'_' && i + 1 < s.size() && is_digit(s[i + 1])) {
            i += 2;
        } else {
            break;
        }
    }
    return i;
}

template <typename Pred>
size_t match_radix_run(const std::u32string& s, size_t i, Pred ok) {
    // (?:_?D)+ for digit class D — at least one digit, underscores between.
    size_t j = i;
    bool any = false;
    while (j < s.size()) {
        size_t k = j;
        if (s[k] == U'_') ++k;
        if (k < s.size() && ok(s[k])) {
            j = k + 1;
            any = true;
        } else {
            break;
        }
    }
    return any ? j : i;
}

// [eE][-+]?[0-9](?:_?[0-9])* — all or nothing.
size_t match_exponent(const std::u32string& s, size_t i) {
    if (i >= s.size() || (s[i] != U'e' && s[i] != U'E')) return i;
    size_t j = i + 1;
    if (j < s.size() && (s[j] == U'+' || s[j] == U'-')) ++j;
    size_t k = match_digit_run(s, j);
    return k > j ? k : i;
}

size_t match_pointfloat(const std::u32string& s, size_t i) {
    size_t j = i;
    size_t d = match_digit_run(s, j);
    if (d > j && d < s.size() && s[d] == U'.') {
        j = match_digit_run(s, d + 1);
    } else if (j < s.size() && s[j] == U'.' && match_digit_run(s, j + 1) > j + 1) {
        j = match_digit_run(s, j + 1);
    } else {
        return i;
    }
    return match_exponent(s, j) > j ? match_exponent(s, j) : j;
}

size_t match_expfloat(const std::u32string& s, size_t i) {
    size_t d = match_digit_run(s, i);
    if (d == i) return i;
    size_t e = match_exponent(s, d);
    return e > d ? e : i;
}

size_t match_floatnumber(const std::u32string& s, size_t i) {
    size_t p = match_pointfloat(s, i);
    if (p > i) return p;
    return match_expfloat(s, i);
}

size_t match_intnumber(const std::u32string& s, size_t i) {
    const size_t n = s.size();
    if (i < n && s[i] == U'0' && i + 1 < n) {
        char32_t c = to_lower_ascii(s[i + 1]);
        if (c == U'x') {
            size_t j = match_radix_run(s, i + 2, [](char32_t d) {
                return is_digit(d) || (to_lower_ascii(d) >= U'a' && to_lower_ascii(d) <= U'f');
            });
            if (j > i + 2) return j;
        } else if (c == U'b') {
            size_t j = match_radix_run(s, i + 2, [](char32_t d) { return d == U'0' || d == U'1'; });
            if (j > i + 2) return j;
        } else if (c == U'o') {
            size_t j = match_radix_run(s, i + 2, [](char32_t d) { return d >= U'0' && d <= U'7'; });
            if (j > i + 2) return j;
        }
    }
    if (i >= n || !is_digit(s[i])) return i;
    if (s[i] == U'0') {
        // 0(?:_?0)*
        size_t j = i + 1;
        while (j < n) {
            if (s[j] == U'0') {
                ++j;
            } else if (s[j] == U'_' && j + 1 < n && s[j + 1] == U'0') {
                j += 2;
            } else {
                break;
            }
        }
        return j;
    }
    return match_digit_run(s, i);
}

size_t match_number(const std::u32string& s, size_t i) {
    // Imaginary: digit-run j, or float j.
    size_t d = match_digit_run(s, i);
    if (d > i && d < s.size() && (s[d] == U'j' || s[d] == U'J')) return d + 1;
    size_t f = match_floatnumber(s, i);
    if (f > i && f < s.size() && (s[f] == U'j' || s[f] == U'J')) return f + 1;
    if (f > i) return f;
    size_t v = match_intnumber(s, i);
    return v > i ? v : npos;
}

// --- string tail scanning ---

enum class SingleTail { closed, continued, unterminated };

struct SingleTailResult {
    SingleTail state;
    size_t end = 0;  // one past the closing quote when closed
};

SingleTailResult scan_single_tail(const std::u32string& line, size_t i, char32_t qc) {
    const size_t n = line.size();
    while (i < n) {
        char32_t c = line[i];
        if (c == qc) return {SingleTail::closed, i + 1};
        if (c == U'\n') return {SingleTail::unterminated, 0};
        if (c == U'\\') {
            if (i + 1 >= n) return {SingleTail::unterminated, 0};
            if (line[i + 1] == U'\n') return {SingleTail::continued, 0};
            i += 2;
            continue;
        }
        ++i;
    }
    return {SingleTail::unterminated, 0};
}

size_t scan_triple_tail(const std::u32string& line, size_t i, char32_t qc) {
    const size_t n = line.size();
    while (i < n) {
        char32_t c = line[i];
        if (c == U'\\') {
            i += 2;
            continue;
        }
        if (c == qc && i + 2 < n && line[i + 1] == qc && line[i + 2] == qc) return i + 3;
        ++i;
    }
    return npos;
}

struct Lexer {
    const std::vector<std::u32string>& lines;
    std::vector<Token> out;

    int lnum = 0;
    int parenlev = 0;
    bool continued = false;
    std::vector<int> indents{0};

    // continued-string state
    bool in_contstr = false;
    bool needcont = false;  // single-quoted string continued by backslash-newline
    char32_t cont_quote = 0;
    bool cont_triple = false;
    std::u32string contstr;
    std::u32string contline;
    Pos strstart;

    explicit Lexer(const std::vector<std::u32string>& lines) : lines(lines) {}

    void emit(TokenKind kind, std::u32string text, Pos start, Pos end,
              const std::u32string& line) {
        out.push_back(Token{kind, std::move(text), start, end, line});
    }

    [[noreturn]] void fail(const std::string& message, Pos pos) {
        throw TokenizeError(message, pos.line, pos.col);
    }

    std::vector<Token> run() {
        std::u32string empty;
        std::u32string last_line;
        std::u32string line;
        size_t next_index = 0;

        while (true) {
            last_line = line;
            if (next_index < lines.size()) {
                line = lines[next_index++];
            } else {
                line.clear();
            }
            ++lnum;
            size_t pos = 0;
            const size_t max = line.size();

            if (in_contstr) {
                if (line.empty())
                    fail(cont_triple ? "unterminated triple-quoted string literal"
                                     : "unterminated string literal",
                         strstart);
                size_t endpos = npos;
                if (cont_triple) {
                    endpos = scan_triple_tail(line, 0, cont_quote);
                } else {
                    auto r = scan_single_tail(line, 0, cont_quote);
                    if (r.state == SingleTail::closed) {
                        endpos = r.end;
                    } else if (r.state == SingleTail::unterminated && needcont) {
                        fail("unterminated string literal", strstart);
                    }
                }
                if (endpos != npos) {
                    pos = endpos;
                    emit(TokenKind::string, contstr + line.substr(0, endpos), strstart,
                         Pos{lnum, static_cast<int>(endpos)}, contline + line);
                    in_contstr = false;
                    needcont = false;
                    contline.clear();
                } else {
                    contstr += line;
                    contline += line;
                    continue;
                }
            } else if (parenlev == 0 && !continued) {
                if (line.empty()) break;
                int column = 0;
                while (pos < max) {
                    char32_t c = line[pos];
                    if (c == U' ')
                        ++column;
                    else if (c == U'\t')
                        column = (column / kTabSize + 1) * kTabSize;
                    else if (c == U'\f')
                        column = 0;
                    else
                        break;
                    ++pos;
                }
                if (pos == max) break;

                if (line[pos] == U'#' || line[pos] == U'\n') {
                    if (line[pos] == U'#') {
                        std::u32string_view rest(line);
                        rest = text::rstrip(rest.substr(pos), U"\r\n");
                        emit(TokenKind::comment, std::u32string(rest),
                             Pos{lnum, static_cast<int>(pos)},
                             Pos{lnum, static_cast<int>(pos + rest.size())}, line);
                        pos += rest.size();
                    }
                    emit(TokenKind::nl, line.substr(pos), Pos{lnum, static_cast<int>(pos)},
                         Pos{lnum, static_cast<int>(line.size())}, line);
                    continue;
                }

                if (column > indents.back()) {
                    indents.push_back(column);
                    emit(TokenKind::indent, line.substr(0, pos), Pos{lnum, 0},
                         Pos{lnum, static_cast<int>(pos)}, line);
                }
                while (column < indents.back()) {
                    if (std::find(indents.begin(), indents.end(), column) == indents.end())
                        fail("unindent does not match any outer indentation level",
                             Pos{lnum, static_cast<int>(pos)});
                    indents.pop_back();
                    emit(TokenKind::dedent, U"", Pos{lnum, static_cast<int>(pos)},
                         Pos{lnum, static_cast<int>(pos)}, line);
                }
            } else {
                if (line.empty())
                    fail("unexpected end of input in multi-line statement", Pos{lnum, 0});
                continued = false;
            }

            while (pos < max) {
                // Skip [ \f\t]* whitespace.
                while (pos < max && (line[pos] == U' ' || line[pos] == U'\f' || line[pos] == U'\t'))
                    ++pos;
                if (pos >= max) break;
                const size_t start = pos;
                const char32_t c = line[start];

                if (c == U'\n') {
                    Pos spos{lnum, static_cast<int>(start)};
                    Pos epos{lnum, static_cast<int>(start + 1)};
                    emit(parenlev > 0 ? TokenKind::nl : TokenKind::newline, U"\n", spos, epos,
                         line);
                    pos = start + 1;
                    continue;
                }
                if (c == U'#') {
                    std::u32string_view rest(line);
                    rest = text::rstrip(rest.substr(start), U"\r\n");
                    emit(TokenKind::comment, std::u32string(rest),
                         Pos{lnum, static_cast<int>(start)},
                         Pos{lnum, static_cast<int>(start + rest.size())}, line);
                    pos = start + rest.size();
                    continue;
                }
                if (c == U'\\') {
                    if (start + 1 < max && line[start + 1] == U'\n') {
                        continued = true;
                        pos = max;
                        continue;
                    }
                    emit(TokenKind::error, line.substr(start, 1),
                         Pos{lnum, static_cast<int>(start)}, Pos{lnum, static_cast<int>(start + 1)},
                         line);
                    pos = start + 1;
                    continue;
                }

                // String with optional prefix?
                {
                    size_t p = start;
                    while (p < max && p - start < 2 && is_ascii_letter(line[p])) ++p;
                    if (p < max && (line[p] == U'\'' || line[p] == U'"') &&
                        is_string_prefix(std::u32string_view(line).substr(start, p - start))) {
                        if (lex_string(line, start, p)) break;  // switched to contstr state
                        pos = pos_after_string;
                        continue;
                    }
                }

                if (is_digit(c) || (c == U'.' && start + 1 < max && is_digit(line[start + 1]))) {
                    size_t end = match_number(line, start);
                    emit(TokenKind::number, line.substr(start, end - start),
                         Pos{lnum, static_cast<int>(start)}, Pos{lnum, static_cast<int>(end)},
                         line);
                    pos = end;
                    continue;
                }

                if (is_word_char(c)) {
                    size_t end = start + 1;
                    while (end < max && is_word_char(line[end])) ++end;
                    // A run whose first character cannot begin an identifier
                    // (e.g. a superscript digit) is passed through as an
                    // operator-like token, never split apart.
                    const TokenKind kind = is_identifier_start(c) ? TokenKind::name
                                                                  : TokenKind::op;
                    emit(kind, line.substr(start, end - start),
                         Pos{lnum, static_cast<int>(start)}, Pos{lnum, static_cast<int>(end)},
                         line);
                    pos = end;
                    continue;
                }

                size_t oplen = match_operator(line, start);
                if (oplen > 0) {
                    if (c == U'(' || c == U'[' || c == U'{')
                        ++parenlev;
                    else if (c == U')' || c == U']' || c == U'}')
                        --parenlev;
                    emit(TokenKind::op, line.substr(start, oplen),
                         Pos{lnum, static_cast<int>(start)},
                         Pos{lnum, static_cast<int>(start + oplen)}, line);
                    pos = start + oplen;
                    continue;
                }

                emit(TokenKind::error, line.substr(start, 1), Pos{lnum, static_cast<int>(start)},
                     Pos{lnum, static_cast<int>(start + 1)}, line);
                pos = start + 1;
            }
        }

        if (in_contstr)
            fail(cont_triple ? "unterminated triple-quoted string literal"
                             : "unterminated string literal",
                 strstart);
        if (parenlev > 0) fail("unexpected end of input in multi-line statement", Pos{lnum, 0});

        // Implicit NEWLINE when the text does not end in one.
        if (!last_line.empty() && last_line.back() != U'\n' &&
            !text::starts_with(text::strip(last_line, text::kPythonWhitespace), U"#")) {
            int len = static_cast<int>(last_line.size());
            emit(TokenKind::newline, U"", Pos{lnum - 1, len}, Pos{lnum - 1, len + 1}, empty);
        }
        for (size_t i = 1; i < indents.size(); ++i)
            emit(TokenKind::dedent, U"", Pos{lnum, 0}, Pos{lnum, 0}, empty);
        emit(TokenKind::end, U"", Pos{lnum, 0}, Pos{lnum, 0}, empty);
        return std::move(out);
    }

    size_t pos_after_string = 0;

    // Lex a string starting at `start` whose opening quote is at `quote_pos`.
    // Returns true when the lexer switched to continued-string state (caller
    // must stop scanning this line).
    bool lex_string(const std::u32string& line, size_t start, size_t quote_pos) {
        const size_t max = line.size();
        const char32_t qc = line[quote_pos];
        const bool triple = quote_pos + 2 < max && line[quote_pos + 1] == qc &&
                            line[quote_pos + 2] == qc;
        if (triple) {
            size_t endpos = scan_triple_tail(line, quote_pos + 3, qc);
            if (endpos != npos) {
                emit(TokenKind::string, line.substr(start, endpos - start),
                     Pos{lnum, static_cast<int>(start)}, Pos{lnum, static_cast<int>(endpos)},
                     line);
                pos_after_string = endpos;
                return false;
            }
            strstart = Pos{lnum, static_cast<int>(start)};
            contstr = line.substr(start);
            contline = line;
            in_contstr = true;
            cont_triple = true;
            cont_quote = qc;
            needcont = false;
            return true;
        }
        auto r = scan_single_tail(line, quote_pos + 1, qc);
        if (r.state == SingleTail::closed) {
            emit(TokenKind::string, line.substr(start, r.end - start),
                 Pos{lnum, static_cast<int>(start)}, Pos{lnum, static_cast<int>(r.end)}, line);
            pos_after_string = r.end;
            return false;
        }
        if (r.state == SingleTail::continued) {
            strstart = Pos{lnum, static_cast<int>(start)};
            contstr = line.substr(start);
            contline = line;
            in_contstr = true;
            cont_triple = false;
            cont_quote = qc;
            needcont = true;
            return true;
        }
        fail("unterminated string literal", Pos{lnum, static_cast<int>(start)});
    }
};

}  // namespace

const char* to_string(TokenKind k) {
    switch (k) {
        case TokenKind::name: return "NAME";
        case TokenKind::number: return "NUMBER";
        case TokenKind::string: return "STRING";
        case TokenKind::op: return "OP";
        case TokenKind::comment: return "COMMENT";
        case TokenKind::indent: return "INDENT";
        case TokenKind::dedent: return "DEDENT";
        case TokenKind::newline: return "NEWLINE";
        case TokenKind::nl: return "NL";
        case TokenKind::end: return "ENDMARKER";
        case TokenKind::error: return "ERRORTOKEN";
    }
    return "?";
}

std::vector<Token> tokenize_lines(const std::vector<std::u32string>& lines) {
    return Lexer(lines).run();
}

std::vector<Token> tokenize_text(const std::string& utf8) {
    return tokenize_lines(text::split_lines_keepends(text::decode_utf8(utf8)));
}

std::vector<Token> tokenize(const PythonSource& src) { return tokenize_text(src.text); }

}  // namespace nblint::py
