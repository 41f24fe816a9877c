#!/usr/bin/env python3
"""Generate src/chartables.cpp: code-point range tables for word and
identifier characters, extracted from the running Python's own
classification so the C++ scanner splits names exactly like Python does."""
import re
import sys

WORD = re.compile(r"\w")


def ranges_of(pred):
    out = []
    lo = None
    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            ok = False
        else:
            ok = pred(chr(cp))
        if ok and lo is None:
            lo = cp
        elif not ok and lo is not None:
            out.append((lo, cp - 1))
            lo = None
    if lo is not None:
        out.append((lo, 0x10FFFF))
    return out


def emit_table(name, ranges, out):
    out.write(f"const CharRange {name}[] = {{\n")
    for i in range(0, len(ranges), 4):
        chunk = ranges[i:i + 4]
        row = " ".join(f"{{0x{lo:X}, 0x{hi:X}}}," for lo, hi in chunk)
        out.write(f"    {row}\n")
    out.write("};\n")
    out.write(f"const std::size_t {name}_len = sizeof({name}) / sizeof({name}[0]);\n\n")


def main():
    word = ranges_of(lambda ch: WORD.match(ch) is not None)
    ident_start = ranges_of(str.isidentifier)
    ident_cont = ranges_of(lambda ch: ("a" + ch).isidentifier())

    path = sys.argv[1] if len(sys.argv) > 1 else "src/chartables.cpp"
    with open(path, "w") as out:
        out.write(
            "// Generated by scripts/gen_chartables.py — do not edit by hand.\n"
            "// Range tables for Python's word (\\w), identifier-start, and\n"
            "// identifier-continue code points.\n"
            '#include "nblint/chartables.hpp"\n\n'
            "#include <algorithm>\n#include <cstddef>\n\n"
            "namespace nblint::text {\n\n"
            "namespace {\n\n"
            "struct CharRange {\n    char32_t lo;\n    char32_t hi;\n};\n\n"
        )
        emit_table("kWordRanges", word, out)
        emit_table("kIdentStartRanges", ident_start, out)
        emit_table("kIdentContinueRanges", ident_cont, out)
        out.write(
            "bool in_ranges(const CharRange* table, std::size_t n, char32_t c) {\n"
            "    const CharRange* end = table + n;\n"
            "    const CharRange* it = std::upper_bound(\n"
            "        table, end, c,\n"
            "        [](char32_t v, const CharRange& r) { return v < r.lo; });\n"
            "    return it != table && c <= (it - 1)->hi;\n"
            "}\n\n"
            "}  // namespace\n\n"
            "bool is_word_codepoint(char32_t c) {\n"
            "    if (c < 0x80)\n"
            "        return c == U'_' || (c >= U'0' && c <= U'9') ||\n"
            "               (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');\n"
            "    return in_ranges(kWordRanges, kWordRanges_len, c);\n"
            "}\n\n"
            "bool is_identifier_start_codepoint(char32_t c) {\n"
            "    if (c < 0x80)\n"
            "        return c == U'_' || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');\n"
            "    return in_ranges(kIdentStartRanges, kIdentStartRanges_len, c);\n"
            "}\n\n"
            "bool is_identifier_continue_codepoint(char32_t c) {\n"
            "    if (c < 0x80)\n"
            "        return c == U'_' || (c >= U'0' && c <= U'9') ||\n"
            "               (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');\n"
            "    return in_ranges(kIdentContinueRanges, kIdentContinueRanges_len, c);\n"
            "}\n\n"
            "}  // namespace nblint::text\n"
        )
    counts = (len(word), len(ident_start), len(ident_cont))
    print(f"wrote {path}: {counts[0]} word ranges, "
          f"{counts[1]} ident-start ranges, {counts[2]} ident-continue ranges")


if __name__ == "__main__":
    main()
