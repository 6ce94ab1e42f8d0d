"""Paratopy, canonical forms and isomorph-free enumeration of main classes.

Paratopy acts on the triple form of a square: permute the three roles
(row, column, symbol), then relabel each coordinate independently.  The
canonical form of a square is the ``mls 1`` serialization of the smallest
square in its orbit, found by the branch-and-bound search in
:mod:`multilatin._canon`.

Enumeration adds one row at a time.  Level ``m`` keeps one representative
per class of ``m``-row rectangles under row, column and symbol permutations;
every admissible next row is tried on every representative, and duplicates
are merged by canonical form.  Any extension of a discarded rectangle is
isomorphic to an extension of the kept one, so no main class is lost.  A
rectangle with ``n - 1`` rows has exactly one completion, which is then
canonicalized under the full paratopy group.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ._canon import lexmax
from .core import MultiLatinSquare, _require_complete, is_simple
from .equivalence import conjugate_counts
from .errors import InvalidInput, ResourceLimit, ShapeMismatch
from .io import format_square, parse_mls

log = logging.getLogger(__name__)

__all__ = [
    "ParatopyElement",
    "CanonicalForm",
    "CensusRow",
    "apply_paratopy",
    "canonical_form",
    "canonical_square",
    "are_paratopic",
    "admissible_rows",
    "enumerate_main_classes",
    "census",
    "requires_long_run",
    "DEFAULT_NODE_LIMIT",
]

DEFAULT_NODE_LIMIT = 10**8


def _inverse(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for a, b in enumerate(p):
        inv[b] = a
    return tuple(inv)


def _is_perm(p, n) -> bool:
    return sorted(p) == list(range(n))


@dataclass(frozen=True)
class ParatopyElement:
    """``(row_perm, col_perm, sym_perm, role_perm)``, all 0-based permutations.

    Acting on a triple ``t``: coordinate ``r`` first moves to position
    ``role_perm[r]``, then position ``q`` is relabelled by the ``q``-th
    coordinate permutation (row, col, sym in that order).
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    sym_perm: tuple[int, ...]
    role_perm: tuple[int, int, int] = (0, 1, 2)

    def __post_init__(self):
        for name in ("row_perm", "col_perm", "sym_perm", "role_perm"):
            object.__setattr__(self, name, tuple(int(x) for x in getattr(self, name)))
        n = len(self.row_perm)
        if not (_is_perm(self.row_perm, n) and _is_perm(self.col_perm, n) and _is_perm(self.sym_perm, n)):
            raise InvalidInput("row/col/sym permutations must be permutations of the same size")
        if not _is_perm(self.role_perm, 3):
            raise InvalidInput("role_perm must permute (0, 1, 2)")

    @property
    def order(self) -> int:
        return len(self.row_perm)

    @property
    def coordinate_perms(self) -> tuple[tuple[int, ...], ...]:
        return (self.row_perm, self.col_perm, self.sym_perm)

    @classmethod
    def identity(cls, n: int) -> "ParatopyElement":
        ident = tuple(range(n))
        return cls(ident, ident, ident, (0, 1, 2))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "ParatopyElement":
        role = tuple(int(x) for x in rng.permutation(3))
        return cls(*(tuple(int(x) for x in rng.permutation(n)) for _ in range(3)), role)

    def compose(self, other: "ParatopyElement") -> "ParatopyElement":
        """``self`` after ``other``: ``apply(L, g.compose(h)) == apply(apply(L, h), g)``."""
        ginv = _inverse(self.role_perm)
        role = tuple(self.role_perm[other.role_perm[r]] for r in range(3))
        perms = []
        for q in range(3):
            outer = self.coordinate_perms[q]
            inner = other.coordinate_perms[ginv[q]]
            perms.append(tuple(outer[x] for x in inner))
        return ParatopyElement(*perms, role)

    def inverse(self) -> "ParatopyElement":
        inv_role = _inverse(self.role_perm)
        perms = [_inverse(self.coordinate_perms[self.role_perm[q]]) for q in range(3)]
        return ParatopyElement(*perms, inv_role)

    __matmul__ = compose


def apply_paratopy(square: MultiLatinSquare, g: ParatopyElement) -> MultiLatinSquare:
    if g.order != square.order:
        raise ShapeMismatch(f"element of degree {g.order} applied to a square of order {square.order}")
    conj = conjugate_counts(square.counts, g.role_perm)
    out = np.empty_like(conj)
    out[np.ix_(g.row_perm, g.col_perm, g.sym_perm)] = conj
    return MultiLatinSquare(out, square.index)


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """``mls 1`` bytes of the least square in a paratopy orbit (the main-class label)."""

    data: bytes

    def square(self) -> MultiLatinSquare:
        return parse_mls(self.data.decode("ascii"))

    def __str__(self):
        return self.data.decode("ascii")


def canonical_square(square: MultiLatinSquare) -> MultiLatinSquare:
    _require_complete(square)
    return MultiLatinSquare(lexmax(square.counts, conjugates=True), square.index)


def canonical_form(square: MultiLatinSquare) -> CanonicalForm:
    """Equal for two squares exactly when they are paratopic."""
    return CanonicalForm(format_square(canonical_square(square)).encode("ascii"))


def are_paratopic(a: MultiLatinSquare, b: MultiLatinSquare) -> bool:
    if a.order != b.order or a.index != b.index:
        raise ShapeMismatch(f"(n, k) differ: ({a.order}, {a.index}) vs ({b.order}, {b.index})")
    return canonical_form(a) == canonical_form(b)


# -- enumeration --------------------------------------------------------------
def _fillings(bound: Sequence[int], total: int) -> Iterator[tuple[int, ...]]:
    """Count vectors ``x <= bound`` with ``sum(x) == total``, largest first symbol first."""
    n = len(bound)
    suffix = [0] * (n + 1)
    for e in range(n - 1, -1, -1):
        suffix[e] = suffix[e + 1] + bound[e]
    x = [0] * n

    def rec(e, left):
        if e == n - 1:
            if left <= bound[e]:
                x[e] = left
                yield tuple(x)
            return
        hi = min(bound[e], left)
        lo = max(0, left - suffix[e + 1])
        for v in range(hi, lo - 1, -1):
            x[e] = v
            yield from rec(e + 1, left - v)

    if total <= suffix[0]:
        yield from rec(0, total)


def admissible_rows(cap: Sequence[Sequence[int]], k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every row (one count vector per column) that fits under the capacities ``cap[col][sym]``.

    Each cell gets ``k`` symbols and each symbol is used ``k`` times in the row.
    """
    n = len(cap)
    suffix = [[0] * n for _ in range(n + 1)]
    for j in range(n - 1, -1, -1):
        suffix[j] = [a + b for a, b in zip(cap[j], suffix[j + 1])]
    if any(k > s for s in suffix[0]):
        return
    row: list[tuple[int, ...]] = [()] * n

    def rec(j, rem):
        if j == n - 1:
            if all(r <= c for r, c in zip(rem, cap[j])):
                row[j] = tuple(rem)
                yield tuple(row)
            return
        bound = [min(c, r) for c, r in zip(cap[j], rem)]
        nxt = suffix[j + 1]
        for x in _fillings(bound, k):
            new_rem = [r - v for r, v in zip(rem, x)]
            if any(r > s for r, s in zip(new_rem, nxt)):
                continue
            row[j] = x
            yield from rec(j + 1, new_rem)

    yield from rec(0, [k] * n)


def _key(arr: np.ndarray) -> bytes:
    return arr.astype(np.uint8).tobytes()


def _from_key(key: bytes, rows: int, n: int) -> np.ndarray:
    return np.frombuffer(key, dtype=np.uint8).reshape(rows, n, n).astype(np.int64)


def _expand_chunk(args) -> tuple[set[bytes], int]:
    """Extend each rectangle in a chunk by every admissible row; return canonical keys."""
    keys, rows, n, k, final = args
    out: set[bytes] = set()
    nodes = 0
    for key in keys:
        rect = _from_key(key, rows, n)
        cap = (k - rect.sum(axis=0)).tolist()
        for new_row in admissible_rows(cap, k):
            nodes += 1
            child = np.concatenate([rect, np.array(new_row, dtype=np.int64)[None]], axis=0)
            if final:
                last = k - child.sum(axis=0)
                square = np.concatenate([child, last[None]], axis=0)
                out.add(_key(lexmax(square, conjugates=True)))
            else:
                out.add(_key(lexmax(child)))
    return out, nodes


def requires_long_run(n: int, k: int) -> bool:
    """Parameters outside the quick tier (minutes on one core) are gated behind ``long_run``."""
    if n <= 2:
        return False
    if n == 3:
        return k > 6
    if n == 4:
        return k > 2
    if n == 5:
        return k > 1
    return True


def _chunks(items, size):
    for i in range(0, len(items), size):
        yield items[i:i + size]


def enumerate_main_classes(
    n: int,
    k: int,
    *,
    node_limit: int = DEFAULT_NODE_LIMIT,
    long_run: bool = False,
    jobs: int = 1,
) -> list[MultiLatinSquare]:
    """One canonical representative per main class of k-latin squares of order ``n``.

    Sorted by canonical ``mls 1`` bytes, independent of ``jobs``.  Raises
    :class:`ResourceLimit` when more than ``node_limit`` candidate rows are
    generated, or when the parameters need ``long_run`` and it is not set.
    """
    if n < 1 or k < 1:
        raise InvalidInput("n and k must be positive")
    if requires_long_run(n, k) and not long_run:
        raise ResourceLimit(f"(n, k) = ({n}, {k}) is a long run; enable long_run to proceed")
    if n == 1:
        return [MultiLatinSquare(np.full((1, 1, 1), k), k)]

    nodes = 0
    level = set()
    for row in admissible_rows([[k] * n for _ in range(n)], k):
        nodes += 1
        if nodes > node_limit:
            raise ResourceLimit(f"enumeration exceeded {node_limit} nodes")
        rect = np.array(row, dtype=np.int64)[None]
        if n == 2:
            square = np.concatenate([rect, (k - rect.sum(axis=0))[None]], axis=0)
            level.add(_key(lexmax(square, conjugates=True)))
        else:
            level.add(_key(lexmax(rect)))
    rows = 1
    log.info("n=%d k=%d level 1: %d representatives", n, k, len(level))

    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while rows < n - 1:
            final = rows == n - 2
            reps = sorted(level)
            tasks = [(chunk, rows, n, k, final) for chunk in _chunks(reps, max(1, len(reps) // (4 * jobs) or 1))]
            results = pool.map(_expand_chunk, tasks) if pool else map(_expand_chunk, tasks)
            level = set()
            for keys, used in results:
                nodes += used
                if nodes > node_limit:
                    raise ResourceLimit(f"enumeration exceeded {node_limit} nodes")
                level |= keys
            rows += 1
            log.info("n=%d k=%d level %d: %d representatives", n, k, rows, len(level))
    finally:
        if pool:
            pool.shutdown()

    squares = [MultiLatinSquare(_from_key(key, n, n), k) for key in level]
    squares.sort(key=lambda sq: format_square(sq).encode("ascii"))
    return squares


@dataclass(frozen=True)
class CensusRow:
    n: int
    k: int
    main_classes: int
    erodable: int
    separable: int
    simple: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.main_classes, self.erodable, self.separable, self.simple)

    def tsv(self) -> str:
        return "\t".join(str(x) for x in (self.n, self.k, *self.as_tuple()))


def classify(square: MultiLatinSquare) -> tuple[bool, bool, bool]:
    """``(erodable, separable, simple)``; index-1 squares count as neither erodable nor separable."""
    from .separability import find_sub_square

    simple = is_simple(square)
    k = square.index
    if k < 2:
        return False, False, simple
    erodable = find_sub_square(square, 1) is not None
    separable = erodable or any(find_sub_square(square, l) is not None for l in range(2, k // 2 + 1))
    return erodable, separable, simple


def census(
    n: int,
    k: int,
    *,
    representatives: list[MultiLatinSquare] | None = None,
    **kwargs,
) -> CensusRow:
    """Main-class count plus how many classes are erodable, separable and simple."""
    reps = representatives if representatives is not None else enumerate_main_classes(n, k, **kwargs)
    flags = [classify(sq) for sq in reps]
    return CensusRow(
        n,
        k,
        len(reps),
        sum(f[0] for f in flags),
        sum(f[1] for f in flags),
        sum(f[2] for f in flags),
    )


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("MLS_JOBS", "1")))
    except ValueError:
        return 1
