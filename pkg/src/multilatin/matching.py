"""Deterministic maximum bipartite matching by augmenting paths.

Left vertices are processed in ascending order.  Each left vertex first takes
the smallest free right vertex it is adjacent to; only if none is free does it
search for an augmenting path, again scanning right vertices in ascending
order.  The result is therefore a pure function of the adjacency lists.
"""
from __future__ import annotations

from typing import Sequence


def maximum_matching(adjacency: Sequence[Sequence[int]], n_right: int) -> list[int | None]:
    """Return ``match[u]`` (a right vertex or ``None``) for every left vertex ``u``.

    ``adjacency[u]`` must be sorted ascending for the tie-breaking guarantee.
    """
    owner: list[int | None] = [None] * n_right
    match: list[int | None] = [None] * len(adjacency)

    def augment(u: int, seen: list[bool]) -> bool:
        # iterative DFS would be overkill here: paths are at most len(adjacency) long
        for v in adjacency[u]:
            if seen[v]:
                continue
            seen[v] = True
            if owner[v] is None or augment(owner[v], seen):
                owner[v] = u
                match[u] = v
                return True
        return False

    for u, adj in enumerate(adjacency):
        for v in adj:
            if owner[v] is None:
                owner[v] = u
                match[u] = v
                break
        else:
            augment(u, [False] * n_right)
    return match


def perfect_matching(adjacency: Sequence[Sequence[int]], n_right: int) -> list[int] | None:
    """A perfect matching of the left side, or ``None`` if none exists."""
    match = maximum_matching(adjacency, n_right)
    if any(v is None for v in match):
        return None
    return match  # type: ignore[return-value]
