#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nblint/tokenize.hpp"

namespace nblint::py {

// One statement's worth of tokens: physical lines joined across open
// brackets and backslash continuations.
struct LogicalLine {
    // Every token in the group, including comments and the terminating
    // newline token.
    std::vector<Token> tokens;
    // 1-based physical line span covered by the tokens.
    int first_line = 0;
    int last_line = 0;
    // Per-token bracket nesting depth, measured after applying the token's
    // own effect: an opening bracket is already inside its bracket, the
    // matching closer is back outside.
    std::vector<int> bracket_depths;
    // The joined single-line text. String literal contents are masked with
    // 'x' so later scanning never mistakes string interiors for code.
    std::u32string text;
    // Monotone map from offsets in `text` back to physical positions:
    // (0, start of first token), then one (length-so-far, token end) entry
    // per contributing token.
    std::vector<std::pair<int, Pos>> offset_map;
};

// Replace a string literal's interior with 'x' characters, keeping the
// prefix, quotes, and length intact.
std::u32string mute_string(const std::u32string& text);

// Joined text plus offset map for one token group, built with the same
// whitespace-padding rules the style checker applies: a gap inside one
// physical line is copied verbatim, a line break collapses to a single
// space (or nothing around brackets).
struct JoinedText {
    std::u32string text;
    std::vector<std::pair<int, Pos>> offset_map;
};
JoinedText join_logical(const std::vector<Token>& group);

// Map an offset in LogicalLine::text to a physical position.
Pos map_logical_offset(const std::vector<std::pair<int, Pos>>& offset_map, int offset);

// Group a full token stream into logical lines. Blank lines and
// comment-only lines produce no logical line; a logical line ends only at a
// newline token at bracket depth zero.
std::vector<LogicalLine> logical_lines(const std::vector<Token>& tokens);

}  // namespace nblint::py
