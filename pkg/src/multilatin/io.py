"""Text formats: ``mls 1`` squares, ``sls 1`` semi-latin squares, ``oa`` triple lists, map files.

``mls 1``::

    mls 1
    4 2
    1,2|1,2|3,3|4,4
    ...

One line per row, cells separated by ``|``, each cell its symbols in
ascending order with repetition, ``-`` for an empty cell.  Whitespace around
separators is ignored on input; output is canonical, so two squares are equal
exactly when their serializations are.
"""
from __future__ import annotations

import re
import sys
from collections import Counter

from .core import MultiLatinSquare, validate_cells
from .equivalence import OrthogonalArray, SemiLatinSquare, SymbolCollapseMap
from .errors import FormatError, InvalidSemiLatin, ValidationError

__all__ = [
    "format_square",
    "parse_mls",
    "format_semi_latin",
    "parse_sls",
    "format_oa",
    "parse_oa",
    "parse_map",
    "format_map",
    "parse_square",
    "read_file",
]


def _format_cell(symbols) -> str:
    return ",".join(str(s) for s in symbols) if symbols else "-"


def format_square(square: MultiLatinSquare) -> str:
    lines = ["mls 1", f"{square.order} {square.index}"]
    for row in square.cells():
        lines.append("|".join(_format_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    """Non-blank lines with their 1-based line numbers; ``#`` starts a comment."""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line, raw


def _ints(line: str, no: int, count: int, what: str) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise FormatError(f"expected {what}", no, 1)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(f"expected {what}", no, 1) from None


def _parse_grid(lines, n: int, header: str):
    rows = []
    for _ in range(n):
        try:
            no, line, raw = next(lines)
        except StopIteration:
            raise FormatError(f"{header}: expected {n} rows, got {len(rows)}") from None
        tokens = line.split("|")
        if len(tokens) != n:
            raise FormatError(f"expected {n} cells, got {len(tokens)}", no, 1)
        row = []
        col = raw.find(line) + 1
        for tok in tokens:
            t = tok.strip()
            if t == "-" or t == "":
                if t == "":
                    raise FormatError("empty cell token (use '-')", no, col)
                row.append(())
            else:
                try:
                    row.append(tuple(sorted(int(x) for x in t.split(","))))
                except ValueError:
                    raise FormatError(f"bad cell {t!r}", no, col) from None
            col += len(tok) + 1
        rows.append(row)
    extra = next(lines, None)
    if extra is not None:
        raise FormatError("unexpected trailing content", extra[0], 1)
    return rows


def _header(lines, magic: str):
    try:
        no, line, _ = next(lines)
    except StopIteration:
        raise FormatError("empty input") from None
    if line.split() != magic.split():
        raise FormatError(f"expected header {magic!r}", no, 1)


def parse_mls(text: str, *, require_complete: bool = False) -> MultiLatinSquare:
    """Parse ``mls 1`` text into a validated (partial) square.

    Raises :class:`FormatError` for syntax problems and :class:`ValidationError`
    when the grid breaks a latin constraint or uses a symbol outside ``1..n``.
    """
    lines = _content_lines(text)
    _header(lines, "mls 1")
    try:
        no, line, _ = next(lines)
    except StopIteration:
        raise FormatError("missing 'n k' line") from None
    n, k = _ints(line, no, 2, "'n k'")
    if n < 1 or k < 1:
        raise FormatError("n and k must be positive", no, 1)
    rows = _parse_grid(lines, n, "mls 1")
    report = validate_cells(rows, k, require_complete)
    if not report.valid:
        raise ValidationError(report)
    return MultiLatinSquare.from_cells(rows, k)


def format_semi_latin(sls: SemiLatinSquare) -> str:
    lines = ["sls 1", f"{sls.order} {sls.k}"]
    for row in sls.cells:
        lines.append("|".join(_format_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def parse_sls(text: str) -> SemiLatinSquare:
    lines = _content_lines(text)
    _header(lines, "sls 1")
    try:
        no, line, _ = next(lines)
    except StopIteration:
        raise FormatError("missing 'n k' line") from None
    n, k = _ints(line, no, 2, "'n k'")
    if n < 1 or k < 1:
        raise FormatError("n and k must be positive", no, 1)
    rows = _parse_grid(lines, n, "sls 1")
    sls = SemiLatinSquare(tuple(tuple(r) for r in rows), k)
    problems = sls.problems()
    if problems:
        raise InvalidSemiLatin("; ".join(problems))
    return sls


_OA_HEADER = re.compile(r"^oa\s+N=(\d+)\s+m=(\d+)\s+q=(\d+)\s+lambda=(\d+)$")
_OA_LINE = re.compile(r"^(\d+)\s+(\d+)\s+(\d+)(?:\s+[x×](\d+))?$")


def format_oa(oa: OrthogonalArray) -> str:
    """Header ``oa N=.. m=3 q=.. lambda=..`` then ``r c s`` lines, repeats folded as ``×m``."""
    lines = [f"oa N={oa.size} m=3 q={oa.q} lambda={oa.index}"]
    for (r, c, s), mult in oa.sorted_triples():
        lines.append(f"{r} {c} {s}" + (f" ×{mult}" if mult > 1 else ""))
    return "\n".join(lines) + "\n"


def parse_oa(text: str, *, check: bool = True) -> OrthogonalArray:
    lines = _content_lines(text)
    try:
        no, line, _ = next(lines)
    except StopIteration:
        raise FormatError("empty input") from None
    m = _OA_HEADER.match(line)
    if not m:
        raise FormatError("expected header 'oa N=.. m=3 q=.. lambda=..'", no, 1)
    size, constraints, q, lam = (int(g) for g in m.groups())
    if constraints != 3:
        raise FormatError("only m=3 arrays are supported", no, 1)
    triples: Counter = Counter()
    for no, line, _ in lines:
        t = _OA_LINE.match(line)
        if not t:
            raise FormatError("expected 'r c s' or 'r c s ×m'", no, 1)
        r, c, s = (int(x) for x in t.groups()[:3])
        if not all(1 <= x <= q for x in (r, c, s)):
            raise FormatError(f"coordinate outside 1..{q}", no, 1)
        triples[(r, c, s)] += int(t.group(4) or 1)
    oa = OrthogonalArray(triples, q)
    if oa.size != size:
        raise FormatError(f"header says N={size} but {oa.size} triples were read")
    if size != lam * q * q:
        raise FormatError(f"N={size} is not lambda*q^2={lam * q * q}")
    if check:
        oa.check_strength2()
    return oa


def parse_map(text: str, n: int) -> SymbolCollapseMap:
    """``source target`` lines defining a balanced map ``{1..kn} -> {1..n}``."""
    mapping = {}
    for no, line, _ in _content_lines(text):
        src, dst = _ints(line, no, 2, "'source target'")
        if src in mapping:
            raise FormatError(f"source {src} mapped twice", no, 1)
        mapping[src] = dst
    f = SymbolCollapseMap.from_mapping(mapping, n)
    f.check_balanced()
    return f


def format_map(f: SymbolCollapseMap) -> str:
    return "".join(f"{x} {y}\n" for x, y in enumerate(f.image, start=1))


def parse_square(text: str):
    """Dispatch on the header: ``mls 1`` / ``sls 1`` / ``oa ...``."""
    for _, line, _ in _content_lines(text):
        head = line.split()[0]
        break
    else:
        raise FormatError("empty input")
    if head == "mls":
        return parse_mls(text)
    if head == "sls":
        return parse_sls(text)
    if head == "oa":
        return parse_oa(text)
    raise FormatError(f"unknown format header {head!r}", 1, 1)


def read_file(path) -> str:
    """Read a text file; ``-`` means standard input."""
    if str(path) == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()
