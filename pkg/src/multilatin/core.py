"""Data model, validation and the basic constructions for (partial) k-latin squares.

A square of order ``n`` is stored as an ``n x n x n`` integer array ``counts`` where
``counts[i, j, e]`` is the multiplicity of symbol ``e + 1`` in cell ``(i, j)``.
Row/column positions are ordinary 0-based Python indices; symbols are ``1..n``
whenever they cross the API boundary (cells, text formats), ``0..n-1`` inside
``counts``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    InvalidInput,
    NotASubset,
    NotSimple,
    OrderMismatch,
    UnsupportedParameters,
    ValidationError,
)

__all__ = [
    "MultiLatinSquare",
    "ViolationKind",
    "Violation",
    "ValidationReport",
    "validate",
    "validate_cells",
    "is_simple",
    "inflate",
    "cyclic_simple",
    "cyclic_latin",
    "join",
    "remove",
    "complement_simple",
]


class MultiLatinSquare:
    """An immutable ``n x n`` grid of multisets over ``{1..n}`` with index ``k``.

    The constructor only checks structure (shape, non-negative counts); the
    latin constraints are checked by :func:`validate`, so malformed squares can
    be represented and diagnosed.  ``k`` may be omitted when every cell has the
    same cardinality.
    """

    __slots__ = ("_counts", "_k", "_hash")

    def __init__(self, counts, k: int | None = None):
        arr = np.array(counts, dtype=np.int64)
        if arr.ndim != 3 or not (arr.shape[0] == arr.shape[1] == arr.shape[2]):
            raise InvalidInput(f"counts must have shape (n, n, n), got {arr.shape}")
        if arr.shape[0] < 1:
            raise InvalidInput("order must be positive")
        if (arr < 0).any():
            raise InvalidInput("negative multiplicity")
        if k is None:
            card = arr.sum(axis=2)
            if not (card == card.flat[0]).all():
                raise InvalidInput("cells differ in cardinality; pass k explicitly")
            k = int(card.flat[0])
        if k < 0:
            raise InvalidInput("index must be non-negative")
        arr.flags.writeable = False
        self._counts = arr
        self._k = int(k)
        self._hash = None

    # -- construction -------------------------------------------------------
    @classmethod
    def from_cells(cls, rows: Sequence[Sequence[Iterable[int]]], k: int | None = None):
        """Build from nested cells of 1-based symbols, e.g. ``[[(1, 2), (1, 2)], ...]``.

        Raises :class:`ValidationError` if a symbol lies outside ``1..n`` or the
        grid is not square.
        """
        n = len(rows)
        report = _structural_report(rows, n)
        if not report.valid:
            raise ValidationError(report)
        counts = np.zeros((n, n, n), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, cell in enumerate(row):
                for s in cell:
                    counts[i, j, s - 1] += 1
        return cls(counts, k)

    @classmethod
    def empty(cls, n: int, k: int) -> "MultiLatinSquare":
        return cls(np.zeros((n, n, n), dtype=np.int64), k)

    # -- accessors ----------------------------------------------------------
    @property
    def order(self) -> int:
        return self._counts.shape[0]

    n = order

    @property
    def index(self) -> int:
        return self._k

    k = index

    @property
    def counts(self) -> np.ndarray:
        """Read-only ``(n, n, n)`` multiplicity array."""
        return self._counts

    def cell(self, i: int, j: int) -> tuple[int, ...]:
        """Symbols of cell ``(i, j)`` in ascending order, with repetition."""
        v = self._counts[i, j]
        return tuple(s + 1 for s in range(len(v)) for _ in range(int(v[s])))

    def cells(self) -> list[list[tuple[int, ...]]]:
        n = self.order
        return [[self.cell(i, j) for j in range(n)] for i in range(n)]

    def cardinalities(self) -> np.ndarray:
        return self._counts.sum(axis=2)

    @property
    def is_complete(self) -> bool:
        return validate(self, require_complete=True).valid

    def transpose(self) -> "MultiLatinSquare":
        return MultiLatinSquare(self._counts.transpose(1, 0, 2), self._k)

    # -- dunder -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MultiLatinSquare):
            return NotImplemented
        return (
            self._k == other._k
            and self._counts.shape == other._counts.shape
            and bool((self._counts == other._counts).all())
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._k, self._counts.shape, self._counts.tobytes()))
        return self._hash

    def __repr__(self):
        return f"MultiLatinSquare(n={self.order}, k={self.index}, cells={self.cells()!r})"

    def __str__(self):
        from .io import format_square

        return format_square(self)


# -- validation ---------------------------------------------------------------
class ViolationKind(str, enum.Enum):
    ROW_EXCESS = "RowExcess"
    COL_EXCESS = "ColExcess"
    CELL_OVERFULL = "CellOverfull"
    SYMBOL_OUT_OF_RANGE = "SymbolOutOfRange"
    CELL_UNDERFULL = "CellUnderfull"
    SHAPE = "Shape"


class Violation(NamedTuple):
    """One violated constraint.

    ``row``/``col`` are 0-based positions (``None`` when the constraint is about
    a whole column or row), ``symbol`` is 1-based, ``observed`` is the offending
    count (or the offending symbol / row length for range and shape errors).
    """

    kind: ViolationKind
    row: int | None
    col: int | None
    symbol: int | None
    observed: int


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}

    def summary(self, limit: int = 5) -> str:
        if self.valid:
            return "valid"
        parts = []
        for v in self.violations[:limit]:
            where = []
            if v.row is not None:
                where.append(f"row {v.row + 1}")
            if v.col is not None:
                where.append(f"col {v.col + 1}")
            if v.symbol is not None:
                where.append(f"symbol {v.symbol}")
            parts.append(f"{v.kind.value}({', '.join(where)}: {v.observed})")
        more = len(self.violations) - limit
        if more > 0:
            parts.append(f"... {more} more")
        return "; ".join(parts)


def _structural_report(rows, n) -> ValidationReport:
    out = []
    for i, row in enumerate(rows):
        if len(row) != n:
            out.append(Violation(ViolationKind.SHAPE, i, None, None, len(row)))
            continue
        for j, cell in enumerate(row):
            for s in cell:
                if not (1 <= s <= n):
                    out.append(Violation(ViolationKind.SYMBOL_OUT_OF_RANGE, i, j, s, s))
    return ValidationReport(tuple(out))


def _count_report(counts: np.ndarray, k: int, require_complete: bool) -> list[Violation]:
    out = []
    n = counts.shape[0]
    card = counts.sum(axis=2)
    rows = counts.sum(axis=1)  # (row, symbol)
    cols = counts.sum(axis=0)  # (col, symbol)
    for i in range(n):
        for j in range(n):
            c = int(card[i, j])
            if c > k:
                out.append(Violation(ViolationKind.CELL_OVERFULL, i, j, None, c))
            elif require_complete and c < k:
                out.append(Violation(ViolationKind.CELL_UNDERFULL, i, j, None, c))
    for i, e in zip(*np.nonzero(rows > k)):
        out.append(Violation(ViolationKind.ROW_EXCESS, int(i), None, int(e) + 1, int(rows[i, e])))
    for j, e in zip(*np.nonzero(cols > k)):
        out.append(Violation(ViolationKind.COL_EXCESS, None, int(j), int(e) + 1, int(cols[j, e])))
    return out


def validate(square: MultiLatinSquare, require_complete: bool = False) -> ValidationReport:
    """Check every latin constraint of ``square`` and report all violations.

    As a partial square every cell holds at most ``k`` symbols and every symbol
    occurs at most ``k`` times per row and column; ``require_complete``
    additionally flags cells holding fewer than ``k`` symbols.
    """
    return ValidationReport(tuple(_count_report(square.counts, square.index, require_complete)))


def validate_cells(rows, k: int, require_complete: bool = False) -> ValidationReport:
    """Like :func:`validate` but on raw nested cells of 1-based symbols.

    This is the only path on which :attr:`ViolationKind.SYMBOL_OUT_OF_RANGE`
    can be reported, since a :class:`MultiLatinSquare` cannot hold such symbols.
    """
    n = len(rows)
    structural = _structural_report(rows, n)
    if not structural.valid:
        return structural
    counts = np.zeros((n, n, n), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            for s in cell:
                counts[i, j, s - 1] += 1
    return ValidationReport(tuple(_count_report(counts, k, require_complete)))


def _require_complete(square: MultiLatinSquare, what: str = "square"):
    report = validate(square, require_complete=True)
    if not report.valid:
        raise ValidationError(report, f"{what} is not a complete {square.index}-latin square: {report.summary()}")


def is_simple(square: MultiLatinSquare) -> bool:
    """True iff no cell repeats a symbol."""
    return bool((square.counts <= 1).all())


# -- constructions ------------------------------------------------------------
def _as_latin(latin) -> MultiLatinSquare:
    if isinstance(latin, MultiLatinSquare):
        sq = latin
    else:
        arr = np.asarray(latin)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidInput("a latin square must be a square 2-D array of symbols")
        n = arr.shape[0]
        if arr.min() < 1 or arr.max() > n:
            raise InvalidInput(f"latin square symbols must lie in 1..{n}")
        counts = np.zeros((n, n, n), dtype=np.int64)
        ii, jj = np.indices((n, n))
        counts[ii, jj, arr - 1] = 1
        sq = MultiLatinSquare(counts, 1)
    if sq.index != 1 or not validate(sq, require_complete=True).valid:
        raise InvalidInput("input is not a latin square")
    return sq


def inflate(latin, k: int) -> MultiLatinSquare:
    """Replace each symbol of a latin square by ``k`` copies of itself.

    ``latin`` is a 1-latin :class:`MultiLatinSquare` or a 2-D array of symbols ``1..n``.
    """
    if k < 1:
        raise UnsupportedParameters("k must be positive")
    sq = _as_latin(latin)
    return MultiLatinSquare(sq.counts * k, k)


def cyclic_simple(n: int, k: int) -> MultiLatinSquare:
    """The simple square whose cell ``(i, j)`` holds ``k`` consecutive residues from ``i + j``.

    With 1-based positions cell ``(i, j)`` is ``{(i+j mod n), ..., (i+j+k-1 mod n)}``
    where ``mod`` lands in ``1..n``.  Needs ``n >= k``.
    """
    if n < 1 or k < 1:
        raise UnsupportedParameters("n and k must be positive")
    if n < k:
        raise UnsupportedParameters(f"no simple {k}-latin square of order {n} exists (need n >= k)")
    counts = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            # 1-based (i+1)+(j+1)+t mod n into 1..n, then 0-based
            for t in range(k):
                counts[i, j, (i + j + 2 + t - 1) % n] += 1
    return MultiLatinSquare(counts, k)


def cyclic_latin(n: int) -> MultiLatinSquare:
    return cyclic_simple(n, 1)


def join(a: MultiLatinSquare, b: MultiLatinSquare) -> MultiLatinSquare:
    """Cell-wise multiset union; the index of the result is ``a.index + b.index``."""
    if a.order != b.order:
        raise OrderMismatch(f"orders differ: {a.order} != {b.order}")
    _require_complete(a, "left operand")
    _require_complete(b, "right operand")
    return MultiLatinSquare(a.counts + b.counts, a.index + b.index)


def remove(square: MultiLatinSquare, sub: MultiLatinSquare) -> MultiLatinSquare:
    """Cell-wise multiset difference ``square - sub``; inverse of :func:`join`."""
    if square.order != sub.order:
        raise OrderMismatch(f"orders differ: {square.order} != {sub.order}")
    _require_complete(square)
    _require_complete(sub, "sub-square")
    if not sub.index < square.index:
        raise InvalidInput(f"sub-square index {sub.index} must be below {square.index}")
    diff = square.counts - sub.counts
    bad = np.argwhere((diff < 0).any(axis=2))
    if len(bad):
        raise NotASubset(tuple(int(x) for x in bad[0]))
    return MultiLatinSquare(diff, square.index - sub.index)


def complement_simple(square: MultiLatinSquare) -> MultiLatinSquare:
    """Replace every cell of a simple square by its complement in ``{1..n}``."""
    _require_complete(square)
    if not is_simple(square):
        raise NotSimple("complement is only defined for simple squares")
    if square.index >= square.order:
        raise UnsupportedParameters("complement needs k < n")
    return MultiLatinSquare(1 - square.counts, square.order - square.index)
