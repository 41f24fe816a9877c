#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nblint::text {

// Decode UTF-8 into code points; invalid sequences become U+FFFD (one per bad byte).
std::u32string decode_utf8(std::string_view bytes);

// Encode code points back to UTF-8; lone surrogates/invalid scalars become U+FFFD bytes.
std::string encode_utf8(std::u32string_view text);

// Split into lines, each keeping its trailing '\n' (a final piece without '\n'
// is kept too). "" -> {}. "a\n" -> {"a\n"}. "a\nb" -> {"a\n", "b"}.
std::vector<std::u32string> split_lines_keepends(std::u32string_view text);
std::vector<std::string> split_lines_keepends(std::string_view text);

bool starts_with(std::u32string_view s, std::u32string_view prefix);
bool ends_with(std::u32string_view s, std::u32string_view suffix);

// Strip characters in `chars` from the respective end(s).
std::u32string_view lstrip(std::u32string_view s, std::u32string_view chars);
std::u32string_view rstrip(std::u32string_view s, std::u32string_view chars);
std::u32string_view strip(std::u32string_view s, std::u32string_view chars);

inline constexpr std::u32string_view kPythonWhitespace = U" \t\n\r\v\f";

bool is_blank(std::u32string_view s);  // only whitespace (or empty)

// True for every code point Python's str.strip()/str.isspace() treat as
// whitespace (ASCII whitespace, NEL, NBSP, the Unicode space separators,
// and the line/paragraph separators).
bool is_python_space(char32_t c);

// Indent width of a line (trailing newline ignored): with no tab present,
// the number of leading whitespace code points; with tabs, a walk over
// leading spaces/tabs where a tab advances to the next multiple of 8.
int expand_indent(std::u32string_view line);

bool contains(std::u32string_view s, char32_t c);

std::string format_int(long long v);

}  // namespace nblint::text
