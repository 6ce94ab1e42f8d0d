"""Orthogonal arrays, conjugates and semi-latin squares.

A k-latin square of order ``n`` is the same thing as a multiset of ``k n^2``
triples ``(row, col, symbol)`` in which each of the three coordinate pairs
takes every value pair exactly ``k`` times, i.e. an ``OA_k(kn^2, 3, n, 2)``.
A triple is also a triangle of ``kK_{n,n,n}``; no separate graph type is kept.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import MultiLatinSquare, _require_complete, validate
from .errors import (
    Incomplete,
    InvalidInput,
    InvalidSemiLatin,
    NotStrength2,
    UnbalancedMap,
    ValidationError,
)
from .matching import perfect_matching

__all__ = [
    "ROLE_PERMUTATIONS",
    "OrthogonalArray",
    "SemiLatinSquare",
    "SymbolCollapseMap",
    "to_orthogonal_array",
    "from_orthogonal_array",
    "conjugate",
    "conjugates",
    "collapse_semi_latin",
    "expand_to_semi_latin",
    "block_map",
]

#: The six permutations of the roles (row, col, symbol), identity first.
ROLE_PERMUTATIONS: tuple[tuple[int, int, int], ...] = tuple(permutations(range(3)))

ROLE_NAMES = ("row", "col", "symbol")


@dataclass(frozen=True)
class OrthogonalArray:
    """An ``OA_lambda(N, 3, q, 2)`` stored as a multiset of 1-based triples."""

    triples: Counter
    q: int

    def __post_init__(self):
        object.__setattr__(self, "triples", Counter({tuple(t): c for t, c in self.triples.items() if c}))

    @property
    def size(self) -> int:
        return sum(self.triples.values())

    N = size

    @property
    def constraints(self) -> int:
        return 3

    @property
    def index(self) -> int:
        """``N / q^2``; an integer only for a genuine strength-2 array."""
        return self.size // (self.q * self.q)

    def pair_counts(self, roles: tuple[int, int]) -> Counter:
        a, b = roles
        out: Counter = Counter()
        for t, c in self.triples.items():
            out[(t[a], t[b])] += c
        return out

    def check_strength2(self) -> None:
        """Raise :class:`NotStrength2` at the first role pair / value pair off its index."""
        q = self.q
        lam, rem = divmod(self.size, q * q)
        if rem or lam < 1:
            raise NotStrength2(None, None, self.size, f"a positive multiple of {q * q} triples")
        for t in self.triples:
            if not all(1 <= x <= q for x in t):
                raise InvalidInput(f"triple {t} has a coordinate outside 1..{q}")
        for roles in combinations(range(3), 2):
            pc = self.pair_counts(roles)
            for u in range(1, q + 1):
                for v in range(1, q + 1):
                    if pc[(u, v)] != lam:
                        names = (ROLE_NAMES[roles[0]], ROLE_NAMES[roles[1]])
                        raise NotStrength2(names, (u, v), pc[(u, v)], lam)

    def sorted_triples(self) -> list[tuple[tuple[int, int, int], int]]:
        return sorted(self.triples.items())


def to_orthogonal_array(square: MultiLatinSquare) -> OrthogonalArray:
    """One triple per symbol occurrence (with multiplicity)."""
    report = validate(square, require_complete=True)
    if not report.valid:
        raise Incomplete(f"square is not complete: {report.summary()}")
    c = square.counts
    triples = Counter()
    for i, j, e in zip(*np.nonzero(c)):
        triples[(int(i) + 1, int(j) + 1, int(e) + 1)] = int(c[i, j, e])
    return OrthogonalArray(triples, square.order)


def from_orthogonal_array(oa: OrthogonalArray) -> MultiLatinSquare:
    oa.check_strength2()
    n = oa.q
    counts = np.zeros((n, n, n), dtype=np.int64)
    for (i, j, e), c in oa.triples.items():
        counts[i - 1, j - 1, e - 1] += c
    return MultiLatinSquare(counts, oa.index)


def _inverse(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for a, b in enumerate(perm):
        inv[b] = a
    return tuple(inv)


def conjugate_counts(counts: np.ndarray, role_perm: Sequence[int]) -> np.ndarray:
    """Move coordinate ``r`` of every triple to position ``role_perm[r]``."""
    return np.transpose(counts, _inverse(role_perm))


def conjugate(square: MultiLatinSquare, role_perm: Sequence[int]) -> MultiLatinSquare:
    """Permute the roles of every triple: old role ``r`` becomes role ``role_perm[r]``.

    With this convention ``conjugate(conjugate(L, s), t) == conjugate(L, t o s)``
    where ``(t o s)[r] = t[s[r]]``.
    """
    if sorted(role_perm) != [0, 1, 2]:
        raise InvalidInput(f"not a permutation of the three roles: {role_perm}")
    return MultiLatinSquare(conjugate_counts(square.counts, role_perm), square.index)


def conjugates(square: MultiLatinSquare) -> list[MultiLatinSquare]:
    """All six conjugates in :data:`ROLE_PERMUTATIONS` order (identity first)."""
    _require_complete(square)
    return [conjugate(square, p) for p in ROLE_PERMUTATIONS]


# -- semi-latin squares -------------------------------------------------------
@dataclass(frozen=True)
class SemiLatinSquare:
    """An ``(n x n)/k`` semi-latin square: cells are k-subsets of ``{1..kn}``."""

    cells: tuple[tuple[tuple[int, ...], ...], ...]
    k: int

    def __post_init__(self):
        cells = tuple(tuple(tuple(sorted(int(x) for x in c)) for c in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)

    @property
    def order(self) -> int:
        return len(self.cells)

    n = order

    def problems(self) -> list[str]:
        n, k = self.order, self.k
        out = []
        if k < 1:
            out.append("block size must be positive")
            return out
        full = set(range(1, k * n + 1))
        for i, row in enumerate(self.cells):
            if len(row) != n:
                out.append(f"row {i + 1} has {len(row)} cells, expected {n}")
                return out
            for j, c in enumerate(row):
                if len(c) != k or len(set(c)) != k:
                    out.append(f"cell ({i + 1},{j + 1}) is not a {k}-subset")
                if not set(c) <= full:
                    out.append(f"cell ({i + 1},{j + 1}) has elements outside 1..{k * n}")
        if out:
            return out
        for i, row in enumerate(self.cells):
            seen = [x for c in row for x in c]
            if sorted(seen) != sorted(full):
                out.append(f"row {i + 1} does not contain each of 1..{k * n} exactly once")
        for j in range(n):
            seen = [x for i in range(n) for x in self.cells[i][j]]
            if sorted(seen) != sorted(full):
                out.append(f"column {j + 1} does not contain each of 1..{k * n} exactly once")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def is_simple(self) -> bool:
        """No pair of elements shares a cell more than once (the SOMA condition)."""
        seen = set()
        for row in self.cells:
            for c in row:
                for pair in combinations(c, 2):
                    if pair in seen:
                        return False
                    seen.add(pair)
        return True


@dataclass(frozen=True)
class SymbolCollapseMap:
    """A map ``{1..kn} -> {1..n}`` given as a tuple ``image[x - 1]``."""

    image: tuple[int, ...]
    n: int

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int], n: int) -> "SymbolCollapseMap":
        size = len(mapping)
        if sorted(mapping) != list(range(1, size + 1)):
            raise UnbalancedMap(f"map must be defined on exactly 1..{size}")
        return cls(tuple(mapping[x] for x in range(1, size + 1)), n)

    @property
    def k(self) -> int:
        return len(self.image) // self.n

    def check_balanced(self) -> None:
        n = self.n
        if len(self.image) % n:
            raise UnbalancedMap(f"domain size {len(self.image)} is not a multiple of {n}")
        k = len(self.image) // n
        pre = Counter(self.image)
        for y in range(1, n + 1):
            if pre[y] != k:
                raise UnbalancedMap(f"{y} has {pre[y]} preimages, expected {k}")
        if set(pre) - set(range(1, n + 1)):
            raise UnbalancedMap(f"image leaves 1..{n}")

    def __call__(self, x: int) -> int:
        return self.image[x - 1]


def block_map(n: int, k: int) -> SymbolCollapseMap:
    """``x -> ceil(x / k)``, the inverse of the labelling used by :func:`expand_to_semi_latin`."""
    return SymbolCollapseMap(tuple((x - 1) // k + 1 for x in range(1, k * n + 1)), n)


def collapse_semi_latin(sls: SemiLatinSquare, f: SymbolCollapseMap | Mapping[int, int] | None = None) -> MultiLatinSquare:
    """Apply ``f`` to every element of ``sls``; the result is a k-latin square of order ``n``."""
    problems = sls.problems()
    if problems:
        raise InvalidSemiLatin("; ".join(problems))
    n, k = sls.order, sls.k
    if f is None:
        f = block_map(n, k)
    elif not isinstance(f, SymbolCollapseMap):
        f = SymbolCollapseMap.from_mapping(f, n)
    if f.n != n or len(f.image) != k * n:
        raise UnbalancedMap(f"map must send 1..{k * n} onto 1..{n}")
    f.check_balanced()
    counts = np.zeros((n, n, n), dtype=np.int64)
    for i, row in enumerate(sls.cells):
        for j, c in enumerate(row):
            for x in c:
                counts[i, j, f(x) - 1] += 1
    return MultiLatinSquare(counts, k)


def symbol_matchings(square: MultiLatinSquare, symbol: int) -> list[list[int]]:
    """Split the occurrences of ``symbol`` (1-based) into ``k`` perfect matchings.

    The occurrences form a k-regular bipartite multigraph between rows and
    columns.  Matchings are peeled off one at a time; each is a list
    ``match[row] = col``.
    """
    n, k = square.order, square.index
    mult = np.array(square.counts[:, :, symbol - 1])
    out = []
    for _ in range(k):
        adjacency = [np.flatnonzero(mult[i]).tolist() for i in range(n)]
        match = perfect_matching(adjacency, n)
        if match is None:  # pragma: no cover - excluded by regularity
            raise ValidationError(validate(square, True), "symbol graph has no perfect matching")
        mult[np.arange(n), match] -= 1
        out.append(match)
    return out


def expand_to_semi_latin(square: MultiLatinSquare) -> SemiLatinSquare:
    """A semi-latin square that collapses back to ``square`` under :func:`block_map`.

    The edge of matching ``c`` (1-based, extraction order) for symbol ``x``
    carries element ``(x - 1) k + c``.
    """
    report = validate(square, require_complete=True)
    if not report.valid:
        raise Incomplete(f"square is not complete: {report.summary()}")
    n, k = square.order, square.index
    cells: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(n)]
    for x in range(1, n + 1):
        for c, match in enumerate(symbol_matchings(square, x), start=1):
            for i, j in enumerate(match):
                cells[i][j].append((x - 1) * k + c)
    return SemiLatinSquare(tuple(tuple(tuple(c) for c in row) for row in cells), k)


def semi_latin_from_cells(rows: Iterable[Iterable[Iterable[int]]], k: int | None = None) -> SemiLatinSquare:
    rows = [[tuple(c) for c in row] for row in rows]
    if k is None:
        k = len(rows[0][0]) if rows and rows[0] else 0
    return SemiLatinSquare(tuple(tuple(r) for r in rows), k)
