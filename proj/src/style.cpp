#include "nblint/style.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nblint/chartables.hpp"
#include "nblint/logical_lines.hpp"
#include "nblint/text.hpp"
#include "nblint/tokenize.hpp"

namespace nblint::style {

namespace {

using py::Pos;
using py::Token;
using py::TokenKind;
using text::expand_indent;
using text::is_python_space;

// ---------------------------------------------------------------------------
// Small Python-string semantics helpers
// ---------------------------------------------------------------------------

bool contains_char(std::u32string_view set, char32_t c) {
    return set.find(c) != std::u32string_view::npos;
}

// Python-style substring membership: `text in s` (empty text is always in).
bool is_substring(std::u32string_view text, std::u32string_view s) {
    if (text.empty()) return true;
    return s.find(text) != std::u32string_view::npos;
}

std::u32string_view slice_from(std::u32string_view s, int i) {
    if (i < 0) i = 0;
    if (i >= static_cast<int>(s.size())) return {};
    return s.substr(static_cast<size_t>(i));
}

std::u32string_view slice_to(std::u32string_view s, int i) {
    if (i < 0) i = 0;
    if (i > static_cast<int>(s.size())) i = static_cast<int>(s.size());
    return s.substr(0, static_cast<size_t>(i));
}

std::u32string_view py_lstrip(std::u32string_view s) {
    size_t i = 0;
    while (i < s.size() && is_python_space(s[i])) ++i;
    return s.substr(i);
}

std::u32string_view py_rstrip(std::u32string_view s) {
    size_t i = s.size();
    while (i > 0 && is_python_space(s[i - 1])) --i;
    return s.substr(0, i);
}

std::u32string_view py_strip(std::u32string_view s) { return py_rstrip(py_lstrip(s)); }

// str.rstrip(chars): strip every trailing char found in `chars`.
std::u32string_view rstrip_chars(std::u32string_view s, std::u32string_view chars) {
    size_t i = s.size();
    while (i > 0 && chars.find(s[i - 1]) != std::u32string_view::npos) --i;
    return s.substr(0, i);
}

std::u32string_view lstrip_chars(std::u32string_view s, std::u32string_view chars) {
    size_t i = 0;
    while (i < s.size() && chars.find(s[i]) != std::u32string_view::npos) ++i;
    return s.substr(i);
}

// str.split(): pieces separated by whitespace runs, no empties.
std::vector<std::u32string_view> py_split(std::u32string_view s) {
    std::vector<std::u32string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_python_space(s[i])) ++i;
        size_t start = i;
        while (i < s.size() && !is_python_space(s[i])) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

// '' .isspace() is false; otherwise all chars must be whitespace.
bool py_isspace(std::u32string_view s) {
    if (s.empty()) return false;
    for (char32_t c : s)
        if (!is_python_space(c)) return false;
    return true;
}

// Word character for \b boundaries.
bool is_word_char(char32_t c) { return text::is_word_codepoint(c); }

bool py_isidentifier(std::u32string_view s) {
    if (s.empty()) return false;
    if (!text::is_identifier_start_codepoint(s[0])) return false;
    for (size_t i = 1; i < s.size(); ++i)
        if (!text::is_identifier_continue_codepoint(s[i])) return false;
    return true;
}

std::string narrow(std::u32string_view s) { return text::encode_utf8(s); }

// ---------------------------------------------------------------------------
// Keyword and operator families
// ---------------------------------------------------------------------------

const std::set<std::u32string>& keywords() {
    static const std::set<std::u32string> kw = {
        U"and",    U"as",     U"assert", U"async",  U"await",    U"break", U"class",
        U"continue", U"def",  U"del",    U"elif",   U"else",     U"except", U"finally",
        U"for",    U"from",   U"global", U"if",     U"import",   U"in",    U"is",
        U"lambda", U"nonlocal", U"not",  U"or",     U"pass",     U"print", U"raise",
        U"return", U"try",    U"while",  U"with",   U"yield"};
    return kw;
}

bool is_soft_keyword(const std::u32string& s) {
    return s == U"_" || s == U"case" || s == U"match";
}

bool in_unary_operators(const std::u32string& s) {
    return s == U">>" || s == U"**" || s == U"*" || s == U"+" || s == U"-";
}

bool in_arithmetic_op(const std::u32string& s) {
    return s == U"**" || s == U"*" || s == U"/" || s == U"//" || s == U"+" || s == U"-" ||
           s == U"@";
}

bool in_ws_optional_operators(const std::u32string& s) {
    return in_arithmetic_op(s) || s == U"^" || s == U"&" || s == U"|" || s == U"<<" ||
           s == U">>" || s == U"%";
}

bool in_ws_needed_operators(const std::u32string& s) {
    static const std::set<std::u32string> ops = {
        U"**=", U"*=", U"/=",  U"//=", U"+=", U"-=", U"!=",  U"<",   U">",
        U"%=",  U"^=", U"&=",  U"|=",  U"==", U"<=", U">=",  U"<<=", U">>=",
        U"=",   U"and", U"in", U"is",  U"or", U"->", U":="};
    return ops.count(s) > 0;
}

// ---------------------------------------------------------------------------
// Hand-ported regex matchers
// ---------------------------------------------------------------------------

// Match `word` at position i followed by a \b boundary; returns end position.
std::optional<size_t> match_word(std::u32string_view s, size_t i, std::u32string_view word) {
    if (s.size() - i < word.size() || i > s.size()) return std::nullopt;
    if (s.substr(i, word.size()) != word) return std::nullopt;
    size_t end = i + word.size();
    if (end < s.size() && is_word_char(s[end])) return std::nullopt;
    return end;
}

// ^(async\s+def|def)\b
bool match_def_start(std::u32string_view line) {
    if (line.substr(0, 5) == U"async") {
        size_t i = 5;
        size_t ws = i;
        while (ws < line.size() && is_python_space(line[ws])) ++ws;
        if (ws > i && match_word(line, ws, U"def")) return true;
    }
    return match_word(line, 0, U"def").has_value();
}

// ^(async\s+def\s+|def\s+|class\s+|@)   (keywords need trailing whitespace)
bool match_top_level(std::u32string_view line) {
    if (!line.empty() && line[0] == U'@') return true;
    auto with_trailing_space = [&](size_t start, std::u32string_view word) {
        if (line.size() - start < word.size() || start > line.size()) return false;
        if (line.substr(start, word.size()) != word) return false;
        size_t end = start + word.size();
        return end < line.size() && is_python_space(line[end]);
    };
    if (line.substr(0, 5) == U"async") {
        size_t ws = 5;
        while (ws < line.size() && is_python_space(line[ws])) ++ws;
        if (ws > 5 && with_trailing_space(ws, U"def")) return true;
    }
    return with_trailing_space(0, U"def") || with_trailing_space(0, U"class");
}

// ^\s*(def|async\s+def|for|async\s+for|if|elif|else|try|except|finally|with|
//      async\s+with|class|while)\b
bool match_indent_statement(std::u32string_view line) {
    size_t i = 0;
    while (i < line.size() && is_python_space(line[i])) ++i;
    auto async_then = [&](std::u32string_view word) {
        if (line.substr(i, 5) != U"async") return false;
        size_t ws = i + 5;
        while (ws < line.size() && is_python_space(line[ws])) ++ws;
        return ws > i + 5 && match_word(line, ws, word).has_value();
    };
    static const std::u32string_view simple[] = {U"def",     U"for",  U"if",    U"elif",
                                                 U"else",    U"try",  U"except", U"finally",
                                                 U"with",    U"class", U"while"};
    for (auto word : simple)
        if (match_word(line, i, word)) return true;
    return async_then(U"def") || async_then(U"for") || async_then(U"with");
}

// ^u?r?["']
bool match_docstring(std::u32string_view line) {
    size_t i = 0;
    if (i < line.size() && line[i] == U'u') ++i;
    if (i < line.size() && line[i] == U'r') ++i;
    return i < line.size() && (line[i] == U'"' || line[i] == U'\'');
}

// \blambda\b searched within line[0:endpos); returns the match start.
std::optional<size_t> search_lambda(std::u32string_view line, size_t endpos) {
    static constexpr std::u32string_view kWord = U"lambda";
    if (endpos > line.size()) endpos = line.size();
    for (size_t i = 0; i + kWord.size() <= endpos; ++i) {
        if (line.substr(i, kWord.size()) != kWord) continue;
        if (i > 0 && is_word_char(line[i - 1])) continue;
        size_t end = i + kWord.size();
        if (end < endpos && is_word_char(line[end])) continue;
        return i;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// The checker driver
// ---------------------------------------------------------------------------

struct RawDiag {
    int line = 1;
    int offset = 0;  // 0-based column
    std::string code;
    std::string message;
};

class Checker {
public:
    Checker(const std::vector<std::u32string>& lines, const PythonSource& src,
            int max_line_length)
        : lines_(lines), src_(src), max_line_length_(max_line_length) {}

    std::vector<RawDiag> run(const std::vector<Token>& stream);
    std::vector<RawDiag> physical_only();

private:
    // --- driver plumbing ---
    void advance_reader(int upto);
    bool is_eol_token(const Token& tok) const;
    void maybe_check_physical(const Token& tok, const std::u32string& prev_physical);
    void check_physical(const std::u32string& line);
    void check_logical();
    void report(int line, int offset, std::string code, std::string message);

    // --- physical checks ---
    struct PhysResult {
        int offset;
        std::string code;
        std::string message;
    };
    std::optional<PhysResult> phys_maximum_line_length(const std::u32string& line) const;
    std::optional<PhysResult> phys_tabs_obsolete(const std::u32string& line) const;
    std::optional<PhysResult> phys_tabs_or_spaces(const std::u32string& line) const;
    std::optional<PhysResult> phys_trailing_blank_lines(const std::u32string& line) const;
    std::optional<PhysResult> phys_trailing_whitespace(const std::u32string& line) const;

    // --- logical checks (append to lres_) ---
    void yield_off(int offset, std::string code, std::string message);
    void yield_pos(Pos pos, std::string code, std::string message);
    bool is_one_liner() const;
    void logical_blank_lines();
    void logical_compound_statements();
    void logical_continued_indentation();
    void logical_extraneous_whitespace();
    void logical_indentation();
    void logical_missing_whitespace();
    void logical_parameter_equals();
    void logical_whitespace_before_comment();

    struct LogicalResult {
        bool has_pos = false;
        int offset = 0;
        Pos pos;
        std::string code;
        std::string message;
    };

    const std::vector<std::u32string>& lines_;
    const PythonSource& src_;
    int max_line_length_;

    int total_lines_ = 0;
    int line_number_ = 0;
    int reader_line_ = 0;
    std::optional<char32_t> indent_char_;
    int indent_level_ = 0;
    int previous_indent_level_ = 0;
    std::u32string previous_logical_;
    std::u32string previous_unindented_logical_line_;
    std::u32string logical_line_;
    std::vector<std::pair<int, Pos>> mapping_;
    std::vector<Token> tokens_;
    int blank_lines_ = 0;
    int blank_before_ = 0;
    bool multiline_ = false;

    std::vector<LogicalResult> lres_;
    std::vector<RawDiag> out_;
};

void Checker::report(int line, int offset, std::string code, std::string message) {
    out_.push_back(RawDiag{line, offset, std::move(code), std::move(message)});
}

void Checker::advance_reader(int upto) {
    if (upto > total_lines_) upto = total_lines_;
    while (reader_line_ < upto) {
        const std::u32string& line = lines_[reader_line_];
        ++reader_line_;
        if (!indent_char_ && !line.empty() &&
            (line[0] == U' ' || line[0] == U'\t' || line[0] == 0xA0)) {
            indent_char_ = line[0];
        }
    }
}

bool Checker::is_eol_token(const Token& tok) const {
    if (tok.kind == TokenKind::newline || tok.kind == TokenKind::nl) return true;
    return py_lstrip(slice_from(tok.line, tok.end.col)) == U"\\\n";
}

void Checker::maybe_check_physical(const Token& tok, const std::u32string& prev_physical) {
    if (is_eol_token(tok)) {
        if (tok.line.empty()) {
            check_physical(prev_physical);
        } else {
            check_physical(tok.line);
        }
    } else if (tok.kind == TokenKind::string && tok.text.find(U'\n') != std::u32string::npos) {
        int start = tok.start.line;
        int end = tok.end.line;
        multiline_ = true;
        line_number_ = start;
        for (int ln = start; ln < end; ++ln) {
            check_physical(lines_[ln - 1] + U"\n");
            ++line_number_;
        }
        multiline_ = false;
    }
}

void Checker::check_physical(const std::u32string& line) {
    auto apply = [&](std::optional<PhysResult> r) {
        if (!r) return;
        bool is_e101 = r->code == "E101";
        report(line_number_, r->offset, std::move(r->code), std::move(r->message));
        if (is_e101 && !line.empty()) indent_char_ = line[0];
    };
    apply(phys_maximum_line_length(line));
    apply(phys_tabs_obsolete(line));
    apply(phys_tabs_or_spaces(line));
    apply(phys_trailing_blank_lines(line));
    apply(phys_trailing_whitespace(line));
}

std::optional<Checker::PhysResult> Checker::phys_maximum_line_length(
    const std::u32string& physical_line) const {
    std::u32string_view line = py_rstrip(physical_line);
    int length = static_cast<int>(line.size());
    if (length <= max_line_length_) return std::nullopt;
    if (line_number_ == 1 && line.substr(0, 2) == U"#!") return std::nullopt;
    auto chunks = py_split(line);
    if (((chunks.size() == 1 && multiline_) || (chunks.size() == 2 && chunks[0] == U"#")) &&
        length - static_cast<int>(chunks.back().size()) < max_line_length_ - 7) {
        return std::nullopt;
    }
    return PhysResult{max_line_length_, "E501",
                      "line too long (" + std::to_string(length) + " > " +
                          std::to_string(max_line_length_) + " characters)"};
}

std::optional<Checker::PhysResult> Checker::phys_tabs_obsolete(
    const std::u32string& line) const {
    for (size_t i = 0; i < line.size(); ++i) {
        char32_t c = line[i];
        if (c != U' ' && c != U'\t') break;
        if (c == U'\t')
            return PhysResult{static_cast<int>(i), "W191", "indentation contains tabs"};
    }
    return std::nullopt;
}

std::optional<Checker::PhysResult> Checker::phys_tabs_or_spaces(
    const std::u32string& line) const {
    for (size_t i = 0; i < line.size(); ++i) {
        char32_t c = line[i];
        if (c != U' ' && c != U'\t') break;
        if (!indent_char_ || c != *indent_char_)
            return PhysResult{static_cast<int>(i), "E101",
                              "indentation contains mixed spaces and tabs"};
    }
    return std::nullopt;
}

std::optional<Checker::PhysResult> Checker::phys_trailing_blank_lines(
    const std::u32string& physical_line) const {
    if (line_number_ != total_lines_) return std::nullopt;
    std::u32string_view stripped_last = rstrip_chars(physical_line, U"\r\n");
    if (!physical_line.empty() && stripped_last.empty())
        return PhysResult{0, "W391", "blank line at end of file"};
    if (stripped_last == physical_line)
        return PhysResult{static_cast<int>(lines_.back().size()), "W292",
                          "no newline at end of file"};
    return std::nullopt;
}

std::optional<Checker::PhysResult> Checker::phys_trailing_whitespace(
    const std::u32string& physical_line) const {
    std::u32string_view line = rstrip_chars(physical_line, U"\n");
    line = rstrip_chars(line, U"\r");
    line = rstrip_chars(line, U"\x0c");
    std::u32string_view stripped = rstrip_chars(line, U" \t\v");
    if (stripped == line) return std::nullopt;
    if (!stripped.empty())
        return PhysResult{static_cast<int>(stripped.size()), "W291", "trailing whitespace"};
    return PhysResult{0, "W293", "blank line contains whitespace"};
}

// ---------------------------------------------------------------------------
// Logical checks
// ---------------------------------------------------------------------------

void Checker::yield_off(int offset, std::string code, std::string message) {
    LogicalResult r;
    r.offset = offset;
    r.code = std::move(code);
    r.message = std::move(message);
    lres_.push_back(std::move(r));
}

void Checker::yield_pos(Pos pos, std::string code, std::string message) {
    LogicalResult r;
    r.has_pos = true;
    r.pos = pos;
    r.code = std::move(code);
    r.message = std::move(message);
    lres_.push_back(std::move(r));
}

bool Checker::is_one_liner() const {
    if (!match_top_level(logical_line_)) return false;
    int line_idx = line_number_ - 1;
    int prev_indent = line_idx < 1 ? 0 : expand_indent(lines_[line_idx - 1]);
    if (prev_indent > indent_level_) return false;

    const int n = static_cast<int>(lines_.size());
    bool found_def = false;
    while (line_idx < n) {
        std::u32string_view line = py_strip(lines_[line_idx]);
        if (!(line.substr(0, 1) == U"@") && match_top_level(line)) {
            found_def = true;
            break;
        }
        ++line_idx;
    }
    if (!found_def) return false;  // ran off the end looking for a definition

    int next_idx = line_idx + 1;
    bool found_code = false;
    while (next_idx < n) {
        if (!py_strip(lines_[next_idx]).empty()) {
            found_code = true;
            break;
        }
        ++next_idx;
    }
    if (!found_code) return true;  // the definition is last in the file
    return expand_indent(lines_[next_idx]) <= indent_level_;
}

void Checker::logical_blank_lines() {
    constexpr int kTopLevelLines = 2;
    constexpr int kMethodLines = 1;

    if (previous_logical_.empty() && blank_before_ < kTopLevelLines) return;

    if (previous_logical_.substr(0, 1) == U"@") {
        if (blank_lines_)
            yield_off(0, "E304", "blank lines found after function decorator");
    } else if (blank_lines_ > kTopLevelLines ||
               (indent_level_ && blank_lines_ == kMethodLines + 1)) {
        yield_off(0, "E303", "too many blank lines (" + std::to_string(blank_lines_) + ")");
    } else if (match_top_level(logical_line_)) {
        if (is_one_liner() && blank_before_ == 0) return;
        if (indent_level_) {
            if (!(blank_before_ == kMethodLines ||
                  previous_indent_level_ < indent_level_ ||
                  match_docstring(previous_logical_))) {
                int ancestor_level = indent_level_;
                bool nested = false;
                int start_idx = line_number_ - kTopLevelLines;
                if (start_idx < 0) start_idx = static_cast<int>(lines_.size()) - 1;
                for (int idx = start_idx; idx >= 0; --idx) {
                    const std::u32string& line = lines_[idx];
                    if (!py_strip(line).empty() && expand_indent(line) < ancestor_level) {
                        ancestor_level = expand_indent(line);
                        nested = match_def_start(py_lstrip(line));
                        if (nested || ancestor_level == 0) break;
                    }
                }
                if (nested) {
                    yield_off(0, "E306",
                              "expected " + std::to_string(kMethodLines) +
                                  " blank line before a nested definition, found 0");
                } else {
                    yield_off(0, "E301",
                              "expected " + std::to_string(kMethodLines) +
                                  " blank line, found 0");
                }
            }
        } else if (blank_before_ != kTopLevelLines) {
            yield_off(0, "E302",
                      "expected " + std::to_string(kTopLevelLines) + " blank lines, found " +
                          std::to_string(blank_before_));
        }
    } else if (!logical_line_.empty() && !indent_level_ && blank_before_ != kTopLevelLines &&
               (previous_unindented_logical_line_.substr(0, 4) == U"def " ||
                previous_unindented_logical_line_.substr(0, 6) == U"class ")) {
        yield_off(0, "E305",
                  "expected " + std::to_string(kTopLevelLines) +
                      " blank lines after class or function definition, found " +
                      std::to_string(blank_before_));
    }
}

void Checker::logical_compound_statements() {
    const std::u32string& line = logical_line_;
    const int last_char = static_cast<int>(line.size()) - 1;
    int found = static_cast<int>(line.find(U':'));
    int prev_found = 0;
    std::map<char32_t, int> counts = {{U'{', 0}, {U'}', 0}, {U'[', 0},
                                      {U']', 0}, {U'(', 0}, {U')', 0}};
    while (found != static_cast<int>(std::u32string::npos) && -1 < found &&
           found < last_char) {
        for (int i = prev_found; i < found; ++i) {
            auto it = counts.find(line[i]);
            if (it != counts.end()) ++it->second;
        }
        if (counts[U'{'] <= counts[U'}'] &&  // {'a': 1} (dict)
            counts[U'['] <= counts[U']'] &&  // [1:2] (slice)
            counts[U'('] <= counts[U')'] &&  // (annotation)
            line[found + 1] != U'=') {       // assignment expression
            auto lambda_kw = search_lambda(line, static_cast<size_t>(found));
            if (lambda_kw) {
                std::u32string_view before = py_rstrip(slice_to(line, static_cast<int>(*lambda_kw)));
                if (!before.empty() && before.back() == U'=' &&
                    py_isidentifier(py_strip(before.substr(0, before.size() - 1)))) {
                    yield_off(0, "E731", "do not assign a lambda expression, use a def");
                }
                break;
            }
            if (match_def_start(line)) {
                yield_off(0, "E704", "multiple statements on one line (def)");
            } else if (match_indent_statement(line)) {
                yield_off(found, "E701", "multiple statements on one line (colon)");
            }
        }
        prev_found = found;
        size_t next = line.find(U':', static_cast<size_t>(found) + 1);
        found = next == std::u32string::npos ? -1 : static_cast<int>(next);
    }
    size_t semi = line.find(U';');
    while (semi != std::u32string::npos) {
        if (static_cast<int>(semi) < last_char) {
            yield_off(static_cast<int>(semi), "E702",
                      "multiple statements on one line (semicolon)");
        } else {
            yield_off(static_cast<int>(semi), "E703", "statement ends with a semicolon");
        }
        semi = line.find(U';', semi + 1);
    }
}

void Checker::logical_continued_indentation() {
    constexpr int kIndentSize = 4;
    const std::vector<Token>& tokens = tokens_;
    if (tokens.empty()) return;
    const int first_row = tokens.front().start.line;
    const int nrows = 1 + tokens.back().start.line - first_row;
    if (nrows == 1) return;

    const bool indent_next = text::ends_with(logical_line_, U":");

    int row = 0;
    int depth = 0;
    const bool tab_indent = indent_char_ && *indent_char_ == U'\t';
    auto is_valid_hang = [&](int hang) {
        return hang == kIndentSize || (tab_indent && hang == kIndentSize * 2);
    };

    std::vector<int> parens(nrows, 0);
    std::vector<int> rel_indent(nrows, 0);
    std::vector<std::vector<int>> open_rows = {{0}};
    std::vector<std::optional<int>> hangs = {std::nullopt};

    struct Chance {
        enum Kind { boolean, str_marker, tok_text } kind = boolean;
        std::u32string text;
    };
    std::map<int, Chance> indent_chances;

    Pos last_indent = tokens.front().start;
    bool visual_indent_truthy = false;
    bool last_token_multiline = false;
    std::vector<int> indent = {last_indent.col};

    const Token* last_tok = nullptr;
    for (const Token& tok : tokens) {
        const TokenKind kind = tok.kind;
        const std::u32string& tok_text = tok.text;
        const Pos start = tok.start;
        const Pos end = tok.end;
        const std::u32string& line = tok.line;
        last_tok = &tok;

        bool newline = row < start.line - first_row;
        if (newline) {
            row = start.line - first_row;
            newline = !last_token_multiline && kind != TokenKind::newline &&
                      kind != TokenKind::nl;
        }

        if (newline) {
            // this is the beginning of a continuation line.
            last_indent = start;
            rel_indent[row] = expand_indent(line) - indent_level_;

            const bool close_bracket =
                kind == TokenKind::op &&
                (tok_text == U"]" || tok_text == U")" || tok_text == U"}");

            // is the indent relative to an opening bracket line?
            int hang = 0;
            bool hanging_indent = false;
            for (auto it = open_rows[depth].rbegin(); it != open_rows[depth].rend(); ++it) {
                hang = rel_indent[row] - rel_indent[*it];
                hanging_indent = is_valid_hang(hang);
                if (hanging_indent) break;
            }
            if (hangs[depth] && *hangs[depth] != 0)
                hanging_indent = hang == *hangs[depth];

            // is there any chance of visual indent?
            const Chance* visual_chance = nullptr;
            if (!close_bracket && hang > 0) {
                auto it = indent_chances.find(start.col);
                if (it != indent_chances.end()) visual_chance = &it->second;
            }
            visual_indent_truthy = visual_chance != nullptr;
            const bool visual_is_true =
                visual_chance && visual_chance->kind == Chance::boolean;

            if (close_bracket && indent[depth]) {
                // closing bracket for visual indent
                if (start.col != indent[depth])
                    yield_pos(start, "E124",
                              "closing bracket does not match visual indentation");
            } else if (close_bracket && hang == 0) {
                // E133 would fire here under the hang-closing style; the
                // default style accepts a closing bracket on the opening
                // bracket's indent.
            } else if (indent[depth] && start.col < indent[depth]) {
                if (!visual_is_true) {
                    // visual indent is broken
                    yield_pos(start, "E128",
                              "continuation line under-indented for visual indent");
                }
            } else if (hanging_indent ||
                       (indent_next && rel_indent[row] == 2 * kIndentSize)) {
                // hanging indent is verified
                if (close_bracket)
                    yield_pos(start, "E123",
                              "closing bracket does not match indentation of opening "
                              "bracket's line");
                hangs[depth] = hang;
            } else if (visual_is_true) {
                // visual indent is verified
                indent[depth] = start.col;
            } else if (visual_chance &&
                       (visual_chance->kind == Chance::str_marker ||
                        (visual_chance->kind == Chance::tok_text &&
                         visual_chance->text == tok_text))) {
                // ignore token lined up with matching one from a previous line
            } else {
                // indent is broken
                const char* code;
                const char* desc;
                if (hang <= 0) {
                    code = "E122";
                    desc = "missing indentation or outdented";
                } else if (indent[depth]) {
                    code = "E127";
                    desc = "over-indented for visual indent";
                } else if (!close_bracket && hangs[depth] && *hangs[depth] != 0) {
                    code = "E131";
                    desc = "unaligned for hanging indent";
                } else {
                    hangs[depth] = hang;
                    if (hang > kIndentSize) {
                        code = "E126";
                        desc = "over-indented for hanging indent";
                    } else {
                        code = "E121";
                        desc = "under-indented for hanging indent";
                    }
                }
                yield_pos(start, code, std::string("continuation line ") + desc);
            }
        }

        // look for visual indenting
        if (parens[row] && kind != TokenKind::nl && kind != TokenKind::comment &&
            !indent[depth]) {
            indent[depth] = start.col;
            indent_chances[start.col] = Chance{Chance::boolean, {}};
        } else if (kind == TokenKind::string || kind == TokenKind::comment) {
            // deal with implicit string concatenation
            indent_chances[start.col] = Chance{Chance::str_marker, {}};
        } else if (row == 0 && depth == 0 &&
                   (tok_text == U"assert" || tok_text == U"raise" || tok_text == U"with")) {
            // visual indent after assert/raise/with
            indent_chances[end.col + 1] = Chance{Chance::boolean, {}};
        } else if (indent_chances.empty() && row == 0 && depth == 0 && tok_text == U"if") {
            // special case for the "if" statement because len("if (") == 4
            indent_chances[end.col + 1] = Chance{Chance::boolean, {}};
        } else if (tok_text == U":" && py_isspace(slice_from(line, end.col))) {
            open_rows[depth].push_back(row);
        }

        // keep track of bracket depth
        if (kind == TokenKind::op) {
            if (tok_text == U"(" || tok_text == U"[" || tok_text == U"{") {
                ++depth;
                indent.push_back(0);
                hangs.push_back(std::nullopt);
                if (static_cast<int>(open_rows.size()) == depth) open_rows.push_back({});
                open_rows[depth].push_back(row);
                ++parens[row];
            } else if ((tok_text == U")" || tok_text == U"]" || tok_text == U"}") &&
                       depth > 0) {
                // parent indents should not be more than this one
                int prev_indent = indent.back() ? indent.back() : last_indent.col;
                indent.pop_back();
                hangs.pop_back();
                for (int d = 0; d < depth; ++d)
                    if (indent[d] > prev_indent) indent[d] = 0;
                for (auto it = indent_chances.lower_bound(prev_indent);
                     it != indent_chances.end();) {
                    it = indent_chances.erase(it);
                }
                if (static_cast<int>(open_rows.size()) > depth + 1)
                    open_rows.resize(depth + 1);
                --depth;
                if (depth)
                    indent_chances[indent[depth]] = Chance{Chance::boolean, {}};
                for (int idx = row; idx >= 0; --idx) {
                    if (parens[idx]) {
                        --parens[idx];
                        break;
                    }
                }
            }
            if (indent_chances.find(start.col) == indent_chances.end()) {
                // allow lining up tokens
                indent_chances[start.col] = Chance{Chance::tok_text, tok_text};
            }
        }

        last_token_multiline = start.line != end.line;
        if (last_token_multiline) {
            int idx = end.line - first_row;
            if (idx >= 0 && idx < nrows) rel_indent[idx] = rel_indent[row];
        }
    }

    if (indent_next && last_tok &&
        expand_indent(last_tok->line) == indent_level_ + kIndentSize) {
        Pos pos{last_tok->start.line, indent[0] + kIndentSize};
        if (visual_indent_truthy) {
            yield_pos(pos, "E129", "visually indented line with same indent as next "
                                   "logical line");
        } else {
            yield_pos(pos, "E125",
                      "continuation line with same indent as next logical line");
        }
    }
}

void Checker::logical_extraneous_whitespace() {
    const std::u32string& line = logical_line_;
    const int n = static_cast<int>(line.size());
    int i = 0;
    while (i + 1 < n) {
        const char32_t c0 = line[i];
        const char32_t c1 = line[i + 1];
        if (contains_char(U"[({", c0) && (c1 == U' ' || c1 == U'\t')) {
            yield_off(i + 1, "E201",
                      "whitespace after '" + narrow(std::u32string(1, c0)) + "'");
            i += 2;
            continue;
        }
        if ((c0 == U' ' || c0 == U'\t') && contains_char(U"]}),;:", c1) &&
            !(i + 2 < n && line[i + 2] == U'=')) {
            const int found = i;
            const int before_idx = found == 0 ? n - 1 : found - 1;
            if (line[before_idx] != U',') {
                const bool closer = contains_char(U"}])", c1);
                yield_off(found, closer ? "E202" : "E203",
                          "whitespace before '" + narrow(std::u32string(1, c1)) + "'");
            }
            i += 2;
            continue;
        }
        ++i;
    }
}

void Checker::logical_indentation() {
    constexpr int kIndentSize = 4;
    const int c = logical_line_.empty() ? 3 : 0;
    const std::string comment_suffix = logical_line_.empty() ? " (comment)" : "";
    auto code_for = [&](int base) { return "E11" + std::to_string(base + c); };

    if (indent_level_ % kIndentSize) {
        yield_off(0, code_for(1),
                  "indentation is not a multiple of " + std::to_string(kIndentSize) +
                      comment_suffix);
    }
    const bool indent_expect = text::ends_with(previous_logical_, U":");
    if (indent_expect && indent_level_ <= previous_indent_level_) {
        yield_off(0, code_for(2), "expected an indented block" + comment_suffix);
    } else if (!indent_expect && indent_level_ > previous_indent_level_) {
        yield_off(0, code_for(3), "unexpected indentation" + comment_suffix);
    }
    if (indent_expect) {
        const int expected_indent_amount = (indent_char_ && *indent_char_ == U'\t') ? 8 : 4;
        if (indent_level_ > previous_indent_level_ + expected_indent_amount)
            yield_off(0, "E117", "over-indented" + comment_suffix);
    }
}

void Checker::logical_missing_whitespace() {
    enum class Need { no, yes, optional_tup };
    Need need = Need::no;
    Pos tup_pos;
    bool tup_had_gap = false;

    TokenKind prev_type = TokenKind::op;
    std::u32string prev_text;
    bool have_prev_end = false;
    Pos prev_end;
    std::vector<char32_t> brace_stack;

    for (const Token& tok : tokens_) {
        const TokenKind kind = tok.kind;
        const std::u32string& tok_text = tok.text;
        const Pos start = tok.start;
        const Pos end = tok.end;
        const std::u32string& line = tok.line;

        if (kind == TokenKind::op &&
            (tok_text == U"[" || tok_text == U"(" || tok_text == U"{")) {
            brace_stack.push_back(tok_text[0]);
        } else if (kind == TokenKind::name && tok_text == U"lambda") {
            brace_stack.push_back(U'l');
        } else if (!brace_stack.empty()) {
            if (kind == TokenKind::op &&
                (tok_text == U"]" || tok_text == U")" || tok_text == U"}")) {
                brace_stack.pop_back();
            } else if (brace_stack.back() == U'l' && kind == TokenKind::op &&
                       tok_text == U":") {
                brace_stack.pop_back();
            }
        }

        if (kind == TokenKind::nl || kind == TokenKind::newline ||
            kind == TokenKind::indent || kind == TokenKind::dedent ||
            kind == TokenKind::comment || kind == TokenKind::error) {
            continue;
        }

        if (kind == TokenKind::op &&
            (tok_text == U"," || tok_text == U";" || tok_text == U":")) {
            std::u32string_view next_char = slice_from(line, end.col);
            if (next_char.size() > 1) next_char = next_char.substr(0, 1);
            const bool has_next = !next_char.empty();
            const char32_t nc = has_next ? next_char[0] : U'\0';
            if (has_next && nc != U' ' && nc != U'\t' && nc != 0xA0 && nc != U'\r' &&
                nc != U'\n') {
                if (tok_text == U":" && !brace_stack.empty() && brace_stack.back() == U'[') {
                    // slice
                } else if (tok_text == U"," && (nc == U')' || nc == U']')) {
                    // tuple (and list for some reason?)
                } else {
                    yield_pos(start, "E231",
                              "missing whitespace after '" + narrow(tok_text) + "'");
                }
            }
        }

        if (need != Need::no) {
            if (!(start == prev_end)) {
                // Found a (probably) needed space
                if (need == Need::optional_tup && !tup_had_gap)
                    yield_pos(tup_pos, "E225", "missing whitespace around operator");
                need = Need::no;
            } else if ((prev_text == U"/" &&
                        (tok_text == U"," || tok_text == U")" || tok_text == U":")) ||
                       (prev_text == U")" && tok_text == U":")) {
                // Tolerate the "/" operator in function definitions (PEP 570)
            } else {
                if (need == Need::yes || tup_had_gap) {
                    // A needed trailing space was not found
                    yield_pos(prev_end, "E225", "missing whitespace around operator");
                } else if (prev_text != U"**") {
                    const char* code = "E226";
                    const char* optype = "arithmetic";
                    if (prev_text == U"%") {
                        code = "E228";
                        optype = "modulo";
                    } else if (!in_arithmetic_op(prev_text)) {
                        code = "E227";
                        optype = "bitwise or shift";
                    }
                    yield_pos(tup_pos, code,
                              std::string("missing whitespace around ") + optype +
                                  " operator");
                }
                need = Need::no;
            }
        } else if ((kind == TokenKind::op || kind == TokenKind::name) && have_prev_end) {
            bool optional_space = false;
            if (tok_text == U"=" && !brace_stack.empty() &&
                (brace_stack.back() == U'l' || brace_stack.back() == U'(')) {
                // allow lambda default args and keyword args: foo(bar=None)
            } else if (in_ws_needed_operators(tok_text)) {
                need = Need::yes;
            } else if (in_unary_operators(tok_text)) {
                // Check if the operator is used as a binary operator.
                if ((prev_type == TokenKind::op && is_substring(prev_text, U"}])") &&
                     !prev_text.empty()) ||
                    (prev_type != TokenKind::op && !keywords().count(prev_text) &&
                     !is_soft_keyword(prev_text))) {
                    optional_space = true;
                }
            } else if (in_ws_optional_operators(tok_text)) {
                optional_space = true;
            }

            if (optional_space) {
                // Surrounding space is optional, but ensure that the
                // trailing space matches the opening space
                need = Need::optional_tup;
                tup_pos = prev_end;
                tup_had_gap = !(start == prev_end);
            } else if (need == Need::yes && start == prev_end) {
                // A needed opening space was not found
                yield_pos(prev_end, "E225", "missing whitespace around operator");
                need = Need::no;
            }
        }
        prev_type = kind;
        prev_text = tok_text;
        prev_end = end;
        have_prev_end = true;
    }
}

void Checker::logical_parameter_equals() {
    int parens = 0;
    bool no_space = false;
    bool require_space = false;
    bool annotated_func_arg = false;
    Pos prev_end;
    bool have_prev = false;
    const bool in_def = match_def_start(logical_line_);

    static const char* kUnexpected = "unexpected spaces around keyword / parameter equals";
    static const char* kMissing = "missing whitespace around parameter equals";

    for (const Token& tok : tokens_) {
        if (tok.kind == TokenKind::nl) continue;
        const std::u32string& tok_text = tok.text;
        const Pos start = tok.start;
        if (no_space) {
            no_space = false;
            if (!(start == prev_end) && have_prev) yield_pos(prev_end, "E251", kUnexpected);
        }
        if (require_space) {
            require_space = false;
            if (start == prev_end && have_prev) yield_pos(prev_end, "E252", kMissing);
        }
        if (tok.kind == TokenKind::op) {
            if (tok_text == U"(" || tok_text == U"[") {
                ++parens;
            } else if (tok_text == U")" || tok_text == U"]") {
                --parens;
            } else if (in_def && tok_text == U":" && parens == 1) {
                annotated_func_arg = true;
            } else if (parens == 1 && tok_text == U",") {
                annotated_func_arg = false;
            } else if (parens && tok_text == U"=") {
                if (annotated_func_arg && parens == 1) {
                    require_space = true;
                    if (start == prev_end && have_prev)
                        yield_pos(prev_end, "E252", kMissing);
                } else {
                    no_space = true;
                    if (!(start == prev_end) && have_prev)
                        yield_pos(prev_end, "E251", kUnexpected);
                }
            }
            if (!parens) annotated_func_arg = false;
        }
        prev_end = tok.end;
        have_prev = true;
    }
}

void Checker::logical_whitespace_before_comment() {
    Pos prev_end{0, 0};
    for (const Token& tok : tokens_) {
        if (tok.kind == TokenKind::comment) {
            const Pos start = tok.start;
            const std::u32string& line = tok.line;
            const bool inline_comment = !py_strip(slice_to(line, start.col)).empty();
            if (inline_comment) {
                if (prev_end.line == start.line && start.col < prev_end.col + 2)
                    yield_pos(prev_end, "E261", "at least two spaces before inline comment");
            }
            const std::u32string& tok_text = tok.text;
            size_t space_pos = tok_text.find(U' ');
            std::u32string symbol =
                space_pos == std::u32string::npos ? tok_text : tok_text.substr(0, space_pos);
            std::u32string comment =
                space_pos == std::u32string::npos ? std::u32string()
                                                  : tok_text.substr(space_pos + 1);
            // Falsey unless the '#'-stripped head starts with something other
            // than '#'/':' — mirrors `symbol not in '#:' and ...`.
            char32_t bad_prefix = 0;
            if (!is_substring(symbol, U"#:")) {
                std::u32string_view stripped = lstrip_chars(symbol, U"#");
                bad_prefix = stripped.empty() ? U'#' : stripped[0];
            }
            if (inline_comment) {
                const bool comment_starts_ws =
                    !comment.empty() && (comment[0] == U' ' || comment[0] == U'\t' ||
                                         comment[0] == 0xA0);
                if (bad_prefix || comment_starts_ws)
                    yield_pos(start, "E262", "inline comment should start with '# '");
            } else if (bad_prefix && (bad_prefix != U'!' || start.line > 1)) {
                if (bad_prefix != U'#') {
                    yield_pos(start, "E265", "block comment should start with '# '");
                } else if (!comment.empty()) {
                    yield_pos(start, "E266", "too many leading '#' for block comment");
                }
            }
        } else if (tok.kind != TokenKind::nl) {
            prev_end = tok.end;
        }
    }
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

void Checker::check_logical() {
    py::JoinedText joined = py::join_logical(tokens_);
    logical_line_ = std::move(joined.text);
    mapping_ = std::move(joined.offset_map);
    if (mapping_.empty()) return;

    const Pos start_pos = mapping_.front().second;
    const std::u32string& start_line = lines_[start_pos.line - 1];
    indent_level_ = expand_indent(slice_to(start_line, start_pos.col));
    if (blank_before_ < blank_lines_) blank_before_ = blank_lines_;

    lres_.clear();
    logical_blank_lines();
    logical_compound_statements();
    logical_continued_indentation();
    logical_extraneous_whitespace();
    logical_indentation();
    logical_missing_whitespace();
    logical_parameter_equals();
    logical_whitespace_before_comment();

    for (LogicalResult& r : lres_) {
        Pos pos = r.has_pos ? r.pos : py::map_logical_offset(mapping_, r.offset);
        report(pos.line, pos.col, std::move(r.code), std::move(r.message));
    }
    lres_.clear();

    if (!logical_line_.empty()) {
        previous_indent_level_ = indent_level_;
        previous_logical_ = logical_line_;
        if (!indent_level_) previous_unindented_logical_line_ = logical_line_;
    }
    blank_lines_ = 0;
    tokens_.clear();
}

std::vector<RawDiag> Checker::run(const std::vector<Token>& stream) {
    out_.clear();
    total_lines_ = static_cast<int>(lines_.size());
    line_number_ = 0;
    reader_line_ = 0;
    indent_char_.reset();
    indent_level_ = previous_indent_level_ = 0;
    previous_logical_.clear();
    previous_unindented_logical_line_.clear();
    tokens_.clear();
    blank_lines_ = blank_before_ = 0;
    multiline_ = false;

    int parens = 0;
    std::u32string prev_physical;
    for (const Token& tok : stream) {
        if (tok.start.line > total_lines_) break;
        const int read_upto = std::min(tok.end.line, total_lines_);
        advance_reader(read_upto);
        line_number_ = std::max(line_number_, read_upto);
        maybe_check_physical(tok, prev_physical);
        prev_physical = tok.line;
        tokens_.push_back(tok);
        if (tok.kind == TokenKind::op && tok.text.size() == 1) {
            if (contains_char(U"([{", tok.text[0])) {
                ++parens;
            } else if (contains_char(U"}])", tok.text[0])) {
                --parens;
            }
        } else if (parens == 0) {
            if (tok.kind == TokenKind::newline) {
                check_logical();
                blank_before_ = 0;
            } else if (tok.kind == TokenKind::nl) {
                if (tokens_.size() == 1) {
                    // The physical line contains only this token.
                    if (!src_.is_suppressed(tok.start.line)) ++blank_lines_;
                    tokens_.clear();
                } else {
                    check_logical();
                }
            }
        }
    }
    if (!tokens_.empty()) {
        check_physical(lines_.back());
        check_logical();
    }
    return std::move(out_);
}

std::vector<RawDiag> Checker::physical_only() {
    out_.clear();
    total_lines_ = static_cast<int>(lines_.size());
    line_number_ = 0;
    reader_line_ = 0;
    indent_char_.reset();
    multiline_ = false;
    for (int i = 1; i <= total_lines_; ++i) {
        advance_reader(i);
        line_number_ = i;
        check_physical(lines_[i - 1]);
    }
    return std::move(out_);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public interface
// ---------------------------------------------------------------------------

const char* to_string(RulePhase p) {
    switch (p) {
        case RulePhase::physical: return "physical";
        case RulePhase::logical: return "logical";
        case RulePhase::blank_structure: return "blank-structure";
    }
    return "?";
}

std::vector<StyleRule> rule_catalog() {
    auto rule = [](const char* code, const char* remark, RulePhase phase,
                   bool excluded = false) {
        StyleRule r;
        r.code = code;
        r.message_template = remark;
        r.phase = phase;
        r.excluded_from_stats = excluded;
        return r;
    };
    return {
        rule("E111", "indentation is not a multiple of four", RulePhase::logical),
        rule("E128", "continuation line under-indented for visual indent",
             RulePhase::logical),
        rule("E201", "whitespace after (", RulePhase::logical),
        rule("E225", "missing whitespace around operator", RulePhase::logical),
        rule("E231", "missing whitespace after ,, ;, or :", RulePhase::logical),
        rule("E251", "unexpected spaces around keyword / parameter equals",
             RulePhase::logical),
        rule("E261", "at least two spaces before inline comment", RulePhase::logical),
        rule("E265", "block comment should start with #", RulePhase::logical),
        rule("E302", "expected 2 blank lines, found 0", RulePhase::blank_structure),
        rule("E501", "line too long", RulePhase::physical),
        rule("E703", "statement ends with a semicolon", RulePhase::logical),
        rule("W291", "trailing whitespace", RulePhase::physical),
        rule("W292", "no newline at end of file", RulePhase::physical,
             /*excluded=*/true),
        rule("W293", "blank line contains whitespace", RulePhase::physical),
    };
}

const std::vector<std::string>& implemented_codes() {
    static const std::vector<std::string> codes = {
        "E101", "E111", "E112", "E113", "E114", "E115", "E116", "E117", "E121", "E122",
        "E123", "E124", "E125", "E126", "E127", "E128", "E129", "E131", "E201", "E202",
        "E203", "E225", "E226", "E227", "E228", "E231", "E251", "E252", "E261", "E262",
        "E265", "E266", "E301", "E302", "E303", "E304", "E305", "E306", "E501", "E701",
        "E702", "E703", "E704", "E731", "W191", "W291", "W292", "W293", "W391"};
    return codes;
}

const std::vector<std::string>& default_codes() {
    static const std::vector<std::string> codes = [] {
        std::vector<std::string> v;
        for (const StyleRule& r : rule_catalog()) v.push_back(r.code);
        v.push_back("E202");
        v.push_back("E203");
        std::sort(v.begin(), v.end());
        return v;
    }();
    return codes;
}

RuleConfig RuleConfig::with_all_checks() {
    RuleConfig c;
    c.all_checks = true;
    return c;
}

std::set<std::string> RuleConfig::enabled_codes() const {
    auto matches_any = [](const std::string& code, const std::vector<std::string>& prefixes) {
        for (const std::string& p : prefixes) {
            if (!p.empty() && code.compare(0, p.size(), p) == 0) return true;
        }
        return false;
    };
    std::set<std::string> enabled;
    if (!select.empty()) {
        for (const std::string& code : implemented_codes())
            if (matches_any(code, select)) enabled.insert(code);
    } else if (all_checks) {
        enabled.insert(implemented_codes().begin(), implemented_codes().end());
    } else {
        enabled.insert(default_codes().begin(), default_codes().end());
    }
    if (!ignore.empty()) {
        for (auto it = enabled.begin(); it != enabled.end();) {
            if (matches_any(*it, ignore))
                it = enabled.erase(it);
            else
                ++it;
        }
    }
    return enabled;
}

bool RuleConfig::is_enabled(const std::string& code) const {
    return enabled_codes().count(code) > 0;
}

bool is_file_end_code(const std::string& code) { return code == "W292" || code == "W391"; }

std::vector<Diagnostic> check_source(const PythonSource& src, const RuleConfig& config,
                                     const std::string& path,
                                     std::optional<int> cell_index) {
    const std::u32string u32 = text::decode_utf8(src.text);
    const std::vector<std::u32string> lines = text::split_lines_keepends(u32);

    Checker checker(lines, src, config.max_line_length);
    std::vector<RawDiag> raw;
    try {
        raw = checker.run(py::tokenize_lines(lines));
    } catch (const py::TokenizeError&) {
        // Logical structure is unavailable; physical rules still apply.
        raw = checker.physical_only();
    }

    const std::set<std::string> enabled = config.enabled_codes();
    std::vector<Diagnostic> out;
    for (RawDiag& r : raw) {
        if (enabled.find(r.code) == enabled.end()) continue;
        if (src.is_suppressed(r.line)) continue;
        int line = r.line;
        if (line >= 1 && line <= static_cast<int>(src.line_map.size()))
            line = src.line_map[line - 1].original_line;
        out.push_back(make_diagnostic(std::move(r.code), std::move(r.message), path,
                                      cell_index, line, r.offset + 1, Category::style));
    }
    sort_diagnostics(out);
    return out;
}

std::optional<double> error_ratio(const std::vector<Diagnostic>& diags, long long loc,
                                  bool include_file_end_rules) {
    if (loc == 0) return std::nullopt;
    long long n = 0;
    for (const Diagnostic& d : diags) {
        if (d.category != Category::style) continue;
        if (!include_file_end_rules && is_file_end_code(d.code)) continue;
        ++n;
    }
    return static_cast<double>(n) / static_cast<double>(loc);
}

}  // namespace nblint::style
