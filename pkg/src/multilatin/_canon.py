"""Lexicographic orbit maximization for 3-D count arrays.

The object is an ``R x C x S`` array ``T`` (rows, columns, symbols) acted on
by independent permutations of each axis and, when ``R == C == S`` and
conjugates are requested, by the six axis permutations.  We compute the
lexicographic maximum of ``T[rho(i), kappa(j), sigma(e)]`` flattened in
``(i, j, e)`` order.  For arrays whose cells all hold the same number of
symbols this is the minimum of the sorted-cell serialization.

Search outline:

1. Row 0 is built cell by cell, branching on the source row and on each
   source column.  Symbols are never branched on here: they are kept as an
   ordered partition, and each new cell splits blocks by descending count,
   which is the best achievable order inside each block.
2. Symbol blocks still unsplit after row 0 are expanded into all orders.
3. With columns and symbols fixed, the best order of the remaining rows is
   simply descending, so each surviving branch is finished by a sort.
"""
from __future__ import annotations

from itertools import permutations, product

import numpy as np

_ROLE_PERMS = tuple(permutations(range(3)))


def _refine(part, vec):
    key = []
    out = []
    for block in part:
        if len(block) == 1:
            key.append(vec[block[0]])
            out.append(block)
            continue
        order = sorted(block, key=lambda s: -vec[s])
        prev = None
        group: list[int] = []
        for s in order:
            v = vec[s]
            key.append(v)
            if v != prev and group:
                out.append(tuple(group))
                group = []
            group.append(s)
            prev = v
        out.append(tuple(group))
    return tuple(key), tuple(out)


def _first_row_states(arrays):
    """All (array, source row, column order, symbol partition) tying for the best row 0."""
    frontier = []
    for a, L in enumerate(arrays):
        n_sym = len(L[0][0])
        start = (tuple(range(n_sym)),)
        for r in range(len(L)):
            frontier.append((a, r, (), start))
    n_cols = len(arrays[0][0])
    for _ in range(n_cols):
        best = None
        nxt = []
        for a, r, kappa, part in frontier:
            row = arrays[a][r]
            seen_vecs = {}
            for c in range(n_cols):
                if c in kappa:
                    continue
                vec = row[c]
                tv = tuple(vec)
                # identical cells in the same row refine identically
                hit = seen_vecs.get(tv)
                if hit is None:
                    hit = seen_vecs[tv] = _refine(part, vec)
                key, newpart = hit
                if best is None or key > best:
                    best = key
                    nxt = [(a, r, kappa + (c,), newpart)]
                elif key == best:
                    nxt.append((a, r, kappa + (c,), newpart))
        frontier = nxt
    return frontier


def _expand_symbols(part):
    blocks = [list(permutations(b)) if len(b) > 1 else [b] for b in part]
    for choice in product(*blocks):
        yield tuple(s for b in choice for s in b)


def lexmax(T: np.ndarray, conjugates: bool = False) -> np.ndarray:
    """Lexicographically largest image of ``T`` under the permutation group."""
    T = np.asarray(T)
    R, C, S = T.shape
    if conjugates:
        if not R == C == S:
            raise ValueError("conjugation needs a cube")
        arrays_np = []
        seen = set()
        for p in _ROLE_PERMS:
            inv = [0, 0, 0]
            for i, x in enumerate(p):
                inv[x] = i
            A = np.ascontiguousarray(np.transpose(T, inv))
            key = A.tobytes()
            if key not in seen:
                seen.add(key)
                arrays_np.append(A)
    else:
        arrays_np = [np.ascontiguousarray(T)]
    arrays = [A.tolist() for A in arrays_np]

    states = _first_row_states(arrays)

    best_rows = None
    by_array: dict[int, list[tuple[int, tuple, tuple]]] = {}
    for a, r, kappa, part in states:
        for sigma in _expand_symbols(part):
            by_array.setdefault(a, []).append((r, kappa, sigma))

    for a, items in by_array.items():
        A = arrays_np[a]
        r0 = np.array([it[0] for it in items])
        K = np.array([it[1] for it in items])
        Sg = np.array([it[2] for it in items])
        # G[m, i] = row i of A relabelled by state m, flattened over (col, sym)
        G = A[:, K[:, :, None], Sg[:, None, :]]  # (R, M, C, S)
        G = np.ascontiguousarray(G.transpose(1, 0, 2, 3)).reshape(len(items), R, C * S)
        M = len(items)
        flat = G.reshape(M * R, C * S)
        uniq, inv = np.unique(flat, axis=0, return_inverse=True)
        ranks = inv.reshape(M, R).astype(np.int64)
        ranks[np.arange(M), r0] = len(uniq)  # row 0 is pinned first
        ranks = -np.sort(-ranks, axis=1)
        m = np.lexsort(ranks.T[::-1])[-1]
        head = G[m, r0[m]]
        rest = sorted((tuple(G[m, i]) for i in range(R) if i != r0[m]), reverse=True)
        out = np.array([head] + rest, dtype=T.dtype).reshape(R, C, S)
        if best_rows is None or _greater(out, best_rows):
            best_rows = out
    return best_rows


def _greater(a: np.ndarray, b: np.ndarray) -> bool:
    fa, fb = a.ravel(), b.ravel()
    diff = np.flatnonzero(fa != fb)
    return bool(len(diff) and fa[diff[0]] > fb[diff[0]])


def brute_lexmax(T: np.ndarray, conjugates: bool = False) -> np.ndarray:
    """Exhaustive reference over the whole group; only for tiny arrays."""
    T = np.asarray(T)
    R, C, S = T.shape
    arrays = []
    if conjugates:
        for p in _ROLE_PERMS:
            inv = [0, 0, 0]
            for i, x in enumerate(p):
                inv[x] = i
            arrays.append(np.transpose(T, inv))
    else:
        arrays.append(T)
    best = None
    for A in arrays:
        for rp in permutations(range(R)):
            for cp in permutations(range(C)):
                B = A[list(rp)][:, list(cp)]
                for sp in permutations(range(S)):
                    cand = B[:, :, list(sp)]
                    if best is None or _greater(cand, best):
                        best = cand.copy()
    return best
