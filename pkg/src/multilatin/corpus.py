"""Seeded random squares, rectangles and partial squares for property tests and the CLI."""
from __future__ import annotations

import numpy as np

from .classification import _fillings
from .core import MultiLatinSquare
from .errors import UnsupportedParameters


def _random_row(cap: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """A uniformly-shuffled depth-first choice of admissible row under ``cap``."""
    n = cap.shape[0]
    suffix = np.zeros((n + 1, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        suffix[j] = suffix[j + 1] + cap[j]
    row = np.zeros((n, n), dtype=np.int64)

    def rec(j, rem):
        if j == n - 1:
            if (rem <= cap[j]).all():
                row[j] = rem
                return True
            return False
        options = list(_fillings(np.minimum(cap[j], rem).tolist(), k))
        for idx in rng.permutation(len(options)):
            x = np.array(options[idx])
            new_rem = rem - x
            if (new_rem <= suffix[j + 1]).all():
                row[j] = x
                if rec(j + 1, new_rem):
                    return True
        return False

    if not rec(0, np.full(n, k)):  # pragma: no cover - a rectangle always extends
        raise RuntimeError("no admissible row")
    return row


def random_square(n: int, k: int, rng: np.random.Generator) -> MultiLatinSquare:
    """A random complete k-latin square of order ``n``, built row by row."""
    if n < 1 or k < 1:
        raise UnsupportedParameters("n and k must be positive")
    counts = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n - 1):
        counts[i] = _random_row(k - counts.sum(axis=0), k, rng)
    counts[n - 1] = k - counts.sum(axis=0)
    return MultiLatinSquare(counts, k)


def random_rectangle(n: int, k: int, m: int, rng: np.random.Generator) -> MultiLatinSquare:
    """First ``m`` rows of a random square, the other rows empty."""
    counts = np.array(random_square(n, k, rng).counts)
    counts[m:] = 0
    return MultiLatinSquare(counts, k)


def random_partial(m: int, k: int, rng: np.random.Generator, keep: float | None = None) -> MultiLatinSquare:
    """A random partial k-latin square of order ``m``: a random square with symbols dropped.

    Each symbol occurrence survives with probability ``keep`` (drawn uniformly
    from ``[0, 1]`` when not given).
    """
    if keep is None:
        keep = float(rng.random())
    counts = np.array(random_square(m, k, rng).counts)
    kept = rng.binomial(counts, keep)
    return MultiLatinSquare(kept, k)
