#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nblint/source.hpp"

namespace nblint::py {

enum class TokenKind {
    name,
    number,
    string,
    op,
    comment,
    indent,
    dedent,
    newline,  // statement-ending newline
    nl,       // non-logical newline (blank line, comment line, inside brackets)
    end,      // end of stream
    error,    // unrecognized character; tokenization continues
};

const char* to_string(TokenKind k);

struct Pos {
    int line = 1;  // 1-based
    int col = 0;   // 0-based, counted in code points

    friend bool operator==(const Pos&, const Pos&) = default;
};

struct Token {
    TokenKind kind = TokenKind::end;
    std::u32string text;
    Pos start;
    Pos end;
    // The full physical line(s) the token lies on; multi-line strings carry
    // the whole joined span, synthesized end-of-file tokens an empty string.
    std::u32string line;
};

class TokenizeError : public std::runtime_error {
public:
    TokenizeError(const std::string& message, int line, int col)
        : std::runtime_error(message), line(line), col(col) {}
    int line;
    int col;
};

// Tokenize decoded source lines (each keeping its trailing '\n'; the final
// line may lack one). Produces the full stream including comments, blank-line
// `nl` tokens, indent structure, and a trailing `end` token. Unrecognized
// characters yield `error` tokens; unterminated strings, unclosed brackets at
// end of input, and inconsistent dedents throw TokenizeError.
std::vector<Token> tokenize_lines(const std::vector<std::u32string>& lines);

// Convenience over UTF-8 text.
std::vector<Token> tokenize_text(const std::string& text);
std::vector<Token> tokenize(const PythonSource& src);

}  // namespace nblint::py
