#!/usr/bin/env python3
"""Regenerate the parser differential reference dumps.

For every ``tests/fixtures/ctx/*.py`` file, parse it with the interpreter's
own ``ast`` module and write a pre-order node dump to the sibling ``.golden``
file. The layout must stay in lockstep with ``tests/support/ast_dump.cpp``,
which renders the same format from the C++ parse tree:

- one node per line, two-space indentation per depth, ``Module`` at depth 0;
- children in ``ast.iter_child_nodes`` order, skipping operator/context tags;
- ``Name`` lines carry ``id``, binding context, and the full source span
  (1-based lines, 0-based columns, end exclusive);
- a handful of other node kinds carry identifying fields (see ``detail``).

Fixtures must be pure ASCII: the reference reports byte-based columns while
the C++ side counts code points, and ASCII keeps the two identical.
"""

import ast
import sys
from pathlib import Path

SKIP = (ast.expr_context, ast.boolop, ast.operator, ast.unaryop, ast.cmpop)


def constant_kind(value) -> str:
    if isinstance(value, bool):
        return "bool"
    if value is None:
        return "none"
    if isinstance(value, int):
        return "int"
    if isinstance(value, float):
        return "float"
    if isinstance(value, complex):
        return "complex"
    if isinstance(value, str):
        return "str"
    if isinstance(value, bytes):
        return "bytes"
    if value is ...:
        return "ellipsis"
    return "other"


def detail(node) -> str:
    if isinstance(node, ast.Name):
        return (
            f" id={node.id} ctx={type(node.ctx).__name__}"
            f" @{node.lineno}:{node.col_offset}-{node.end_lineno}:{node.end_col_offset}"
        )
    if isinstance(node, ast.Attribute):
        return f" attr={node.attr} ctx={type(node.ctx).__name__}"
    if isinstance(node, (ast.Subscript, ast.Starred, ast.List, ast.Tuple)):
        return f" ctx={type(node.ctx).__name__}"
    if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
        return f" name={node.name}"
    if isinstance(node, ast.arg):
        return f" name={node.arg}"
    if isinstance(node, ast.alias):
        return f" name={node.name} asname={node.asname or '-'}"
    if isinstance(node, ast.keyword):
        return f" arg={node.arg if node.arg is not None else '**'}"
    if isinstance(node, ast.ImportFrom):
        return f" module={node.module or '-'} level={node.level}"
    if isinstance(node, ast.AnnAssign):
        return f" simple={node.simple}"
    if isinstance(node, (ast.Global, ast.Nonlocal)):
        return f" names={','.join(node.names)}"
    if isinstance(node, ast.ExceptHandler):
        return f" name={node.name or '-'}"
    if isinstance(node, ast.Constant):
        return f" kind={constant_kind(node.value)}"
    if isinstance(node, ast.FormattedValue):
        return f" conversion={node.conversion}"
    return ""


def dump(node, depth, out) -> None:
    out.append("  " * depth + type(node).__name__ + detail(node))
    for child in ast.iter_child_nodes(node):
        if isinstance(child, SKIP):
            continue
        dump(child, depth + 1, out)


def main() -> int:
    fixture_dir = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "ctx"
    failures = 0
    for py_path in sorted(fixture_dir.glob("*.py")):
        raw = py_path.read_bytes()
        try:
            raw.decode("ascii")
        except UnicodeDecodeError:
            print(f"{py_path.name}: fixture must be pure ASCII", file=sys.stderr)
            failures += 1
            continue
        if b"\r" in raw:
            print(f"{py_path.name}: fixture must use LF line endings", file=sys.stderr)
            failures += 1
            continue
        try:
            tree = ast.parse(raw.decode("ascii"), filename=str(py_path))
        except SyntaxError as exc:
            print(f"{py_path.name}: does not parse: {exc}", file=sys.stderr)
            failures += 1
            continue
        lines: list[str] = []
        dump(tree, 0, lines)
        py_path.with_suffix(".golden").write_text("\n".join(lines) + "\n")
        print(f"wrote {py_path.with_suffix('.golden').name} ({len(lines)} nodes)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
