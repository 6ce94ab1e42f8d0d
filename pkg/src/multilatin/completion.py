"""Completing k-latin rectangles and embedding partial k-latin squares.

Both procedures repeatedly pick a system of distinct representatives (SDR)
from a family of symbol pools.  The pools stay *regular* throughout: all have
the same cardinality ``c`` and every symbol occurs exactly ``c`` times in
total, which is exactly Hall's condition in disguise, so a perfect matching
between pools and symbols always exists.  Regularity is re-checked after
every step.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import MultiLatinSquare, validate
from .errors import (
    InvalidInput,
    InvalidRectangle,
    NoSystemOfRepresentatives,
    UnsupportedOrder,
)
from .matching import maximum_matching

__all__ = [
    "AvailabilityPool",
    "Rectangle",
    "select_sdr",
    "complete_rectangle",
    "embed_partial",
]


@dataclass
class AvailabilityPool:
    """A family of multisets over ``{1..n}``, one per slot.

    ``counts[slot, e]`` is the multiplicity of symbol ``e + 1`` in that pool.
    ``labels`` name what each slot feeds (a column, a row, a discarded block).
    """

    counts: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        self.counts = np.array(self.counts, dtype=np.int64)
        if not self.labels:
            self.labels = tuple(range(self.counts.shape[0]))

    @classmethod
    def from_multisets(cls, pools: Iterable[Iterable[int]], n: int, labels=()):
        pools = list(pools)
        counts = np.zeros((len(pools), n), dtype=np.int64)
        for slot, pool in enumerate(pools):
            for s in pool:
                counts[slot, s - 1] += 1
        return cls(counts, tuple(labels))

    @property
    def n_symbols(self) -> int:
        return self.counts.shape[1]

    def cardinalities(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def symbol_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def is_regular(self) -> bool:
        """Equal pool cardinalities and equal symbol totals, with one pool per symbol."""
        if self.counts.shape[0] != self.counts.shape[1]:
            return False
        card = self.cardinalities()
        tot = self.symbol_totals()
        return bool((card == card[0]).all() and (tot == card[0]).all())

    def take(self, choice: Sequence[int]) -> None:
        """Remove one copy of ``choice[slot]`` (0-based) from each pool, in place."""
        self.counts[np.arange(len(choice)), np.asarray(choice)] -= 1


def _sdr(counts: np.ndarray) -> list[int]:
    adjacency = [np.flatnonzero(row).tolist() for row in counts]
    match = maximum_matching(adjacency, counts.shape[1])
    if any(v is None for v in match):
        raise NoSystemOfRepresentatives("pool family has no system of distinct representatives")
    return match  # type: ignore[return-value]


def select_sdr(pool: AvailabilityPool) -> tuple[int, ...]:
    """One symbol from each pool, all distinct (1-based symbols, slot order).

    Ties are broken deterministically: slots in ascending order, each taking
    its smallest still-free symbol before any augmenting path is tried.
    """
    return tuple(s + 1 for s in _sdr(pool.counts))


def _check_regular(pool: AvailabilityPool, expected: int) -> None:
    card = pool.cardinalities()
    tot = pool.symbol_totals()
    if not ((card == expected).all() and (tot == expected).all()):
        raise NoSystemOfRepresentatives(
            f"pool regularity lost: cardinalities {card.tolist()}, symbol totals {tot.tolist()}, "
            f"expected {expected}"
        )


@dataclass(frozen=True)
class Rectangle:
    """A partial k-latin square whose first ``filled_rows`` rows are full and the rest empty."""

    square: MultiLatinSquare
    filled_rows: int

    @classmethod
    def from_square(cls, square: MultiLatinSquare) -> "Rectangle":
        report = validate(square)
        if not report.valid:
            raise InvalidRectangle(f"not a partial {square.index}-latin square: {report.summary()}")
        k = square.index
        if k < 1:
            raise InvalidRectangle("index must be positive")
        card = square.cardinalities()
        full = (card == k).all(axis=1)
        empty = (card == 0).all(axis=1)
        m = 0
        while m < square.order and full[m]:
            m += 1
        if not empty[m:].all():
            raise InvalidRectangle(
                "rows after the filled block must be empty (filled rows must come first and be complete)"
            )
        return cls(square, m)

    @property
    def order(self) -> int:
        return self.square.order

    @property
    def index(self) -> int:
        return self.square.index


def _fill_rows(counts: np.ndarray, k: int, m: int) -> np.ndarray:
    """Fill rows ``m..n-1`` of a rectangle's count array in place and return it."""
    n = counts.shape[0]
    pool = AvailabilityPool(k - counts.sum(axis=0), labels=tuple(f"col{j + 1}" for j in range(n)))
    steps = k * (n - m)
    _check_regular(pool, steps)
    for p in range(steps):
        choice = _sdr(pool.counts)
        row = m + p // k
        counts[row, np.arange(n), choice] += 1
        pool.take(choice)
        _check_regular(pool, steps - p - 1)
    return counts


def complete_rectangle(rect) -> MultiLatinSquare:
    """Complete an ``m x n`` k-latin rectangle to a k-latin square of order ``n``.

    Accepts a :class:`Rectangle` or a :class:`MultiLatinSquare` laid out as one.
    Row ``m + q`` is built from the ``k`` consecutive SDR steps ``qk .. qk+k-1``.
    """
    if isinstance(rect, MultiLatinSquare):
        rect = Rectangle.from_square(rect)
    sq = rect.square
    if rect.filled_rows == sq.order:
        return sq
    counts = np.array(sq.counts)
    return MultiLatinSquare(_fill_rows(counts, sq.index, rect.filled_rows), sq.index)


def padded_partial(partial: MultiLatinSquare, n: int) -> np.ndarray:
    """Counts of the order-``n`` partial square that tops up each cell of ``partial``.

    Cell ``(i, j)`` (1-based) receives the symbols
    ``(i+j mod m)+m, ..., (i+j+k-|P(i,j)|-1 mod m)+m``.
    """
    m, k = partial.order, partial.index
    counts = np.zeros((n, n, n), dtype=np.int64)
    counts[:m, :m, :m] = partial.counts
    card = partial.cardinalities()
    for i in range(m):
        for j in range(m):
            for t in range(k - int(card[i, j])):
                counts[i, j, (i + j + t + 1) % m + m] += 1
    return counts


def embed_partial(partial: MultiLatinSquare, n: int) -> MultiLatinSquare:
    """Embed a partial k-latin square of order ``m`` into a k-latin square of order ``n >= 2m``.

    The top-left ``m x m`` block is padded with symbols ``m+1..2m``; rows
    ``1..m`` are then finished by ``k(n-m)`` SDR steps over ``m`` row pools
    and ``n-m`` auxiliary pools that are thrown away, and the remaining rows
    come from :func:`complete_rectangle`.
    """
    m, k = partial.order, partial.index
    if n < 2 * m:
        raise UnsupportedOrder(f"target order {n} is below 2m = {2 * m}")
    if k < 1:
        raise InvalidInput("index must be positive")
    report = validate(partial)
    if not report.valid:
        raise InvalidInput(f"not a partial {k}-latin square: {report.summary()}")

    counts = padded_partial(partial, n)
    x = counts[:m].sum(axis=1)  # X(i): symbols already in row i
    a_pools = k - x
    b_pools = np.zeros((n - m, n), dtype=np.int64)
    b_pools[:m] = x
    b_pools[np.arange(m), np.arange(m)] += k * (n - 2 * m)
    b_pools[m:, m:] = k
    labels = tuple(f"A{i + 1}" for i in range(m)) + tuple(f"B{i + 1}" for i in range(n - m))
    pool = AvailabilityPool(np.vstack([a_pools, b_pools]), labels)

    steps = k * (n - m)
    _check_regular(pool, steps)
    for p in range(steps):
        choice = _sdr(pool.counts)
        col = m + p // k
        counts[np.arange(m), col, choice[:m]] += 1
        pool.take(choice)
        _check_regular(pool, steps - p - 1)

    return MultiLatinSquare(_fill_rows(counts, k, m), k)
