#!/usr/bin/env python3
"""Regenerate frozen token-stream goldens for tests/fixtures/tokens/*.py.

Each golden line: TYPE<TAB>text<TAB>srow,scol<TAB>erow,ecol<TAB>line
with text/line escaped so the files stay ASCII and newline-free.
Run from the repository root. Goldens are frozen; rerun only when the
fixture set changes, and review the diff.
"""
import io
import sys
import token as token_mod
import tokenize
from pathlib import Path


def esc(s: str) -> str:
    out = []
    for ch in s:
        cp = ord(ch)
        if ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif 32 <= cp <= 126:
            out.append(ch)
        elif cp <= 0xFFFF:
            out.append("\\u%04X" % cp)
        else:
            out.append("\\U%08X" % cp)
    return "".join(out)


def dump(path: Path) -> str:
    text = path.read_text(encoding="utf-8")
    lines = []
    for tok in tokenize.generate_tokens(io.StringIO(text).readline):
        name = token_mod.tok_name[tok.type]
        lines.append(
            "%s\t%s\t%d,%d\t%d,%d\t%s"
            % (name, esc(tok.string), tok.start[0], tok.start[1], tok.end[0], tok.end[1], esc(tok.line))
        )
    return "\n".join(lines) + "\n"


def main() -> int:
    root = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "tokens"
    count = 0
    for py in sorted(root.glob("*.py")):
        golden = py.with_suffix(".tok")
        golden.write_text(dump(py), encoding="utf-8")
        count += 1
    print(f"wrote {count} goldens under {root}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
