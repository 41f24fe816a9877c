#!/usr/bin/env python3
"""Freeze style-check golden files for the fixture corpus.

For every ``tests/fixtures/style/*.py`` snippet this runs the reference
PEP 8 checker (pycodestyle, all E/W codes selected) and writes the
diagnostics to a ``.golden`` file next to the snippet, one finding per
line in the form::

    line:col: CODE message

The repository test suite compares the C++ checker's output against
these files after restricting both sides to the codes the C++ checker
implements, so regenerating goldens requires the same pycodestyle
version the frozen files were produced with (2.11.x).
"""

from __future__ import annotations

import re
import subprocess
import sys
from pathlib import Path

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "style"


def reference_output(path: Path) -> str:
    proc = subprocess.run(
        [sys.executable, "-m", "pycodestyle", "--select=E,W", str(path)],
        capture_output=True,
        text=True,
        check=False,
    )
    if proc.returncode not in (0, 1):
        raise RuntimeError(f"pycodestyle failed on {path}: {proc.stderr}")
    lines = []
    prefix = re.escape(str(path)) + r":"
    for raw in proc.stdout.splitlines():
        m = re.match(prefix + r"(\d+):(\d+): (.*)$", raw)
        if not m:
            raise RuntimeError(f"unparseable reference line: {raw!r}")
        lines.append(f"{m.group(1)}:{m.group(2)}: {m.group(3)}")
    return "".join(line + "\n" for line in lines)


def main() -> int:
    import pycodestyle

    if not pycodestyle.__version__.startswith("2.11"):
        print(f"warning: pycodestyle {pycodestyle.__version__}, goldens frozen with 2.11.x", file=sys.stderr)
    snippets = sorted(FIXTURE_DIR.glob("*.py"))
    if not snippets:
        print(f"no fixtures found under {FIXTURE_DIR}", file=sys.stderr)
        return 1
    for snippet in snippets:
        golden = snippet.with_suffix(".golden")
        golden.write_text(reference_output(snippet), encoding="utf-8")
        print(f"wrote {golden.name}")
    print(f"{len(snippets)} goldens frozen")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
