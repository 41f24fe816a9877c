#pragma once

namespace nblint::text {

// Python's regex \w class: letters, digits and numeric code points,
// underscore, and combining word characters.
bool is_word_codepoint(char32_t c);

// A code point that can begin an identifier (str.isidentifier on the single
// character).
bool is_identifier_start_codepoint(char32_t c);

// A code point that can continue an identifier.
bool is_identifier_continue_codepoint(char32_t c);

}  // namespace nblint::text
