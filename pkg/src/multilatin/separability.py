"""Sub-square search, separability predicates and non-separable families.

A k-latin square ``L`` is separable when it contains (cell-wise, as
multisets) an ``l``-latin square for some ``0 < l < k``; the remainder is then
automatically a ``(k - l)``-latin square.  The search here is exhaustive, so a
``None`` answer is a proof that no such sub-square exists.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator, Sequence

import numpy as np

from .core import MultiLatinSquare, _require_complete, remove, validate
from .errors import (
    InvalidInput,
    InvalidQuasigroup,
    NoIdempotentQuasigroup,
    ResourceLimit,
    UnsupportedParameters,
)

__all__ = [
    "SubSquareWitness",
    "Quasigroup",
    "iter_sub_squares",
    "find_sub_square",
    "is_separable",
    "is_erodable",
    "is_fully_separable",
    "construct_Ln",
    "idempotent_quasigroup",
    "construct_Uk",
    "construct_Uks",
]


@dataclass(frozen=True)
class SubSquareWitness:
    """An ``l``-latin square contained cell-wise in ``parent``."""

    sub: MultiLatinSquare
    parent: MultiLatinSquare

    @property
    def l(self) -> int:  # noqa: E743
        return self.sub.index

    def complement(self) -> MultiLatinSquare:
        """The ``(k - l)``-latin square left over after removing ``sub``."""
        return remove(self.parent, self.sub)


def _cell_candidates(vec: Sequence[int], l: int) -> list[tuple[int, ...]]:
    """All ``l``-sub-multisets of a cell as count vectors, in ascending symbol-tuple order."""
    symbols = [e for e, c in enumerate(vec) for _ in range(min(c, l))]
    seen = set()
    out = []
    n = len(vec)
    for combo in combinations_with_replacement(sorted(set(symbols)), l):
        x = [0] * n
        for e in combo:
            x[e] += 1
        if all(x[e] <= vec[e] for e in range(n)):
            t = tuple(x)
            if t not in seen:
                seen.add(t)
                out.append(t)
    return out


def iter_sub_squares(
    square: MultiLatinSquare,
    l: int,
    *,
    first_cell: Sequence[tuple[int, ...]] | None = None,
    node_limit: int | None = None,
) -> Iterator[np.ndarray]:
    """Yield the count arrays of every ``l``-latin square contained in ``square``.

    Each step fills the open cell with the fewest admissible choices (ties
    broken row-major).  A choice ``x`` for cell ``(i, j)`` is admissible when
    it keeps every row and column quota at most ``l`` and leaves each quota
    still reachable from the other open cells of that row or column, i.e.
    ``lower <= x <= upper`` for per-symbol bounds recomputed at every node.
    Cells whose remaining quota can only come from one place are therefore
    filled first.  ``first_cell`` optionally restricts the choices for cell
    ``(0, 0)``.
    """
    C = square.counts
    n = square.order
    cap = np.minimum(C, l)
    cand_rows, cand_cell = [], []
    for i in range(n):
        for j in range(n):
            cands = _cell_candidates(C[i, j].tolist(), l)
            if first_cell is not None and (i, j) == (0, 0):
                allowed = {tuple(x) for x in first_cell}
                cands = [x for x in cands if x in allowed]
            cand_rows.extend(cands)
            cand_cell.extend([i * n + j] * len(cands))
    cands_arr = np.array(cand_rows, dtype=np.int64).reshape(-1, n)
    cell_of = np.array(cand_cell, dtype=np.int64)

    row_used = np.zeros((n, n), dtype=np.int64)  # [row, symbol]
    col_used = np.zeros((n, n), dtype=np.int64)  # [col, symbol]
    is_open = np.ones((n, n), dtype=bool)
    chosen = np.zeros((n, n, n), dtype=np.int64)
    nodes = 0

    def rec(depth: int):
        nonlocal nodes
        if depth == n * n:
            yield chosen.copy()
            return
        open_cap = cap * is_open[:, :, None]
        row_rest = open_cap.sum(axis=1)[:, None, :] - cap  # other open cells of the row
        col_rest = open_cap.sum(axis=0)[None, :, :] - cap
        row_need = l - row_used[:, None, :]
        col_need = l - col_used[None, :, :]
        lower = np.maximum(np.maximum(row_need - row_rest, col_need - col_rest), 0).reshape(n * n, n)
        upper = np.minimum(cap, np.minimum(row_need, col_need)).reshape(n * n, n)
        ok = is_open.reshape(-1)[cell_of]
        ok &= (cands_arr >= lower[cell_of]).all(axis=1) & (cands_arr <= upper[cell_of]).all(axis=1)
        sizes = np.bincount(cell_of[ok], minlength=n * n)
        sizes = np.where(is_open.reshape(-1), sizes, np.iinfo(np.int64).max)
        t = int(np.argmin(sizes))
        if sizes[t] == 0:
            return
        i, j = divmod(t, n)
        is_open[i, j] = False
        for x in cands_arr[ok & (cell_of == t)]:
            nodes += 1
            if node_limit is not None and nodes > node_limit:
                raise ResourceLimit(f"sub-square search exceeded {node_limit} nodes")
            row_used[i] += x
            col_used[j] += x
            chosen[i, j] = x
            yield from rec(depth + 1)
            row_used[i] -= x
            col_used[j] -= x
        chosen[i, j] = 0
        is_open[i, j] = True

    yield from rec(0)


def _check_search_input(square: MultiLatinSquare, l: int) -> None:
    _require_complete(square)
    if not 1 <= l < square.index:
        raise InvalidInput(f"need 1 <= l < k, got l={l}, k={square.index}")


def find_sub_square(square: MultiLatinSquare, l: int, *, node_limit: int | None = None) -> SubSquareWitness | None:
    """First ``l``-latin sub-square in search order, or ``None`` if there is none."""
    _check_search_input(square, l)
    for arr in iter_sub_squares(square, l, node_limit=node_limit):
        return SubSquareWitness(MultiLatinSquare(arr, l), square)
    return None


def _check_index(square: MultiLatinSquare) -> None:
    _require_complete(square)
    if square.index < 2:
        raise InvalidInput("separability is only defined for k >= 2")


def is_separable(square: MultiLatinSquare, *, node_limit: int | None = None) -> tuple[bool, SubSquareWitness | None]:
    """Whether ``square`` is a join of two squares of smaller positive index.

    Only ``l <= k // 2`` is searched: an ``l``-witness exists iff a ``(k - l)``-witness does.
    """
    _check_index(square)
    for l in range(1, square.index // 2 + 1):
        w = find_sub_square(square, l, node_limit=node_limit)
        if w is not None:
            return True, w
    return False, None


def is_erodable(square: MultiLatinSquare, *, node_limit: int | None = None) -> tuple[bool, SubSquareWitness | None]:
    """Whether ``square`` contains a latin square (equivalently, splits off a 1-latin part)."""
    _check_index(square)
    w = find_sub_square(square, 1, node_limit=node_limit)
    return w is not None, w


def is_fully_separable(square: MultiLatinSquare, *, node_limit: int | None = None) -> list[MultiLatinSquare] | None:
    """Decompose ``square`` into ``k`` latin squares, or return ``None`` if impossible.

    Backtracks over the choice of each extracted latin square.  The layer
    extracted first always takes the smallest symbol of the top-left cell
    (some layer must), and residuals already shown indecomposable are
    remembered by their exact contents.
    """
    _require_complete(square)
    failed: set[bytes] = set()
    n = square.order

    def rec(counts: np.ndarray, k: int) -> list[np.ndarray] | None:
        if k == 1:
            return [counts]
        key = counts.tobytes()
        if key in failed:
            return None
        e0 = int(np.flatnonzero(counts[0, 0])[0])
        first = [tuple(int(e == e0) for e in range(n))]
        residual_sq = MultiLatinSquare(counts, k)
        for layer in iter_sub_squares(residual_sq, 1, first_cell=first, node_limit=node_limit):
            rest = rec(counts - layer, k - 1)
            if rest is not None:
                return [layer] + rest
        failed.add(key)
        return None

    layers = rec(np.array(square.counts), square.index)
    if layers is None:
        return None
    return [MultiLatinSquare(a, 1) for a in layers]


# -- explicit constructions ---------------------------------------------------
def _mod(x: int, n: int) -> int:
    """``x mod n`` landing in ``1..n``."""
    return (x - 1) % n + 1


def construct_Ln(n: int) -> MultiLatinSquare:  # noqa: N802
    """The non-separable 2-latin square of order ``n >= 3`` built from two special columns."""
    if n < 3:
        raise UnsupportedParameters("non-separable 2-latin squares exist only for n >= 3")
    cells = [[None] * n for _ in range(n)]
    for i in range(1, n - 1):
        cells[i - 1][0] = cells[i - 1][1] = (i, i + 1)
        for j in range(3, n + 1):
            s = _mod(i + j - 1, n)
            cells[i - 1][j - 1] = (s, s)
    cells[n - 2][0] = cells[n - 1][1] = (1, n)
    cells[n - 1][0] = cells[n - 2][1] = (n - 1, n)
    for j in range(3, n + 1):
        cells[n - 2][j - 1] = cells[n - 1][j - 1] = (j - 2, j - 1)
    return MultiLatinSquare.from_cells(cells, 2)


@dataclass(frozen=True)
class Quasigroup:
    """A latin multiplication table on ``{1..m}``; ``table[a-1][b-1] = a o b``."""

    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        m = len(table)
        full = set(range(1, m + 1))
        if any(len(row) != m for row in table):
            raise InvalidQuasigroup("table must be square")
        if any(set(row) != full for row in table) or any(
            {table[a][b] for a in range(m)} != full for b in range(m)
        ):
            raise InvalidQuasigroup("table is not latin")

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def idempotent(self) -> bool:
        return all(self.table[a][a] == a + 1 for a in range(self.order))

    def __call__(self, a: int, b: int) -> int:
        return self.table[a - 1][b - 1]


def idempotent_quasigroup(m: int) -> Quasigroup:
    """A deterministic idempotent quasigroup of order ``m`` (none exists for ``m = 2``).

    Row-major backtracking with the diagonal fixed, smallest symbol first.
    """
    if m < 1:
        raise UnsupportedParameters("order must be positive")
    if m == 2:
        raise NoIdempotentQuasigroup("there is no idempotent quasigroup of order 2")
    table = [[0] * m for _ in range(m)]
    row_has = [[False] * (m + 1) for _ in range(m)]
    col_has = [[False] * (m + 1) for _ in range(m)]
    for a in range(m):
        table[a][a] = a + 1
        row_has[a][a + 1] = col_has[a][a + 1] = True
    cells = [(a, b) for a in range(m) for b in range(m) if a != b]

    def rec(t: int) -> bool:
        if t == len(cells):
            return True
        a, b = cells[t]
        for s in range(1, m + 1):
            if row_has[a][s] or col_has[b][s]:
                continue
            table[a][b] = s
            row_has[a][s] = col_has[b][s] = True
            if rec(t + 1):
                return True
            row_has[a][s] = col_has[b][s] = False
        table[a][b] = 0
        return False

    if not rec(0):  # pragma: no cover - unreachable for m != 2
        raise NoIdempotentQuasigroup(f"no idempotent quasigroup of order {m}")
    return Quasigroup(tuple(tuple(r) for r in table))


def _check_idempotent(q: Quasigroup, order: int, name: str) -> None:
    if not isinstance(q, Quasigroup):
        q = Quasigroup(q)
    if q.order != order:
        raise InvalidQuasigroup(f"{name} must have order {order}, got {q.order}")
    if not q.idempotent:
        raise InvalidQuasigroup(f"{name} is not idempotent")


def construct_Uk(k: int, q: Quasigroup) -> MultiLatinSquare:  # noqa: N802
    """Non-separable k-latin square of order ``k + 2`` from an idempotent quasigroup of order ``k``."""
    return construct_Uks(k, 0, q, None)


def construct_Uks(k: int, s: int, q1: Quasigroup, q2: Quasigroup | None) -> MultiLatinSquare:  # noqa: N802
    """Non-separable k-latin square of order ``k + s + 2``.

    ``q1`` is an idempotent quasigroup of order ``k``, ``q2`` one of order
    ``s + 2``.  ``s = 0`` (with ``q2`` ignored) gives the order ``k + 2`` square.
    """
    if k < 3:
        raise UnsupportedParameters("need k >= 3")
    if not 0 <= s <= k - 1:
        raise UnsupportedParameters(f"need 1 <= s <= k - 1, got s={s}")
    if not isinstance(q1, Quasigroup):
        q1 = Quasigroup(q1)
    _check_idempotent(q1, k, "first quasigroup")
    if s:
        if not isinstance(q2, Quasigroup):
            q2 = Quasigroup(q2)
        _check_idempotent(q2, s + 2, "second quasigroup")

    n = k + s + 2
    K = range(1, k + 1)
    extra = tuple(range(k + 3, k + s + 3))  # k+3 .. k+s+2, empty when s = 0
    cells: list[list[tuple[int, ...] | None]] = [[None] * n for _ in range(n)]

    def put(i, j, symbols):
        cells[i - 1][j - 1] = tuple(symbols)

    def shift(i):
        return _mod(i + 1, k)

    for i in K:
        put(i, i, (i,) + (k + 1,) * (k - 1))
        put(shift(i), i, (k + 1,) + (q1(shift(i), i),) * (k - s - 1) + extra)
    for i in K:
        for j in K:
            if i != j and i != shift(j):
                put(i, j, (k + 2,) + (q1(i, j),) * (k - s - 1) + extra)
    for i in K:
        put(i, k + 1, (i,) * (k - 1) + (k + 2,))
        put(k + 1, i, (i,) * (k - 1) + (k + 2,))
        others = tuple(x for x in K if x != i)
        for x in range(2, s + 3):
            put(i, k + x, (k + x,) + others)
            put(k + x, i, (k + x,) + others)
    if s == 0:
        put(k + 1, k + 1, K)
        put(k + 2, k + 2, K)
        put(k + 1, k + 2, (k + 1,) * k)
        put(k + 2, k + 1, (k + 1,) * k)
    else:
        for x in range(1, s + 3):
            for y in range(1, s + 3):
                z = q2(x, y)
                if x == y and x >= 3:
                    put(k + x, k + y, (k + 2,) * k)
                elif z == 1:
                    put(k + x, k + y, K)
                elif z == 2:
                    put(k + x, k + y, (k + 1,) * k)
                else:
                    put(k + x, k + y, (k + z,) * k)
    return MultiLatinSquare.from_cells(cells, k)
