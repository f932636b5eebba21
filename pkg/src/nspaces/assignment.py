"""Exact permutation side: quotient distance and the maximal permutation correlation."""

from __future__ import annotations

import functools
import itertools
import math
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import DimensionMismatchError, check_permutation

ENUMERATION_CAP = 9
_CHUNK = 40320


@functools.lru_cache(maxsize=None)
def _permutation_table(n: int) -> np.ndarray:
    """All permutations of range(n), one per row, in lexicographic order."""
    table = np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)
    table.setflags(write=False)
    return table


class EnumerationCapError(ValueError):
    pass


def _pair(f, g) -> tuple[np.ndarray, np.ndarray]:
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise DimensionMismatchError(f"shapes differ: {f.shape} vs {g.shape}")
    return f, g


def sum_sq(f) -> float:
    """Unnormalized sum of squared entries (n^2 times ``l2_norm_sq``)."""
    f = np.asarray(f, dtype=float)
    return math.fsum((f * f).ravel())


def perm_correlation(f, g, sigma: Sequence[int]) -> float:
    """sum_ij f_ij * g[sigma_i, sigma_j], accumulated with ``math.fsum``."""
    f, g = _pair(f, g)
    s = check_permutation(sigma, f.shape[0])
    return math.fsum((f * g[np.ix_(s, s)]).ravel())


def max_perm_correlation(f, g, cap: int = ENUMERATION_CAP) -> tuple[float, tuple[int, ...]]:
    """Exact maximum of :func:`perm_correlation` over all n! permutations.

    Permutations are scanned in lexicographic order. A vectorized pass finds
    the near-maximal candidates; those are re-scored with ``fsum`` and the
    lexicographically first maximizer wins.
    """
    f, g = _pair(f, g)
    n = f.shape[0]
    if n > cap:
        raise EnumerationCapError(f"n = {n} exceeds the enumeration cap {cap}")
    slack = 1e-12 * max(1.0, float(np.abs(f).sum() * np.abs(g).max()))
    flat_f = f.ravel()
    table = _permutation_table(n)
    best_np = -math.inf
    winner, winner_val = None, -math.inf
    for lo in range(0, len(table), _CHUNK):
        block = table[lo:lo + _CHUNK]
        permuted = g[block[:, :, None], block[:, None, :]].reshape(len(block), -1)
        vals = permuted @ flat_f
        best_np = max(best_np, float(vals.max()))
        rows = np.flatnonzero(vals >= best_np - slack)
        # identical relabeled matrices score identically; keep the first of each
        cand = np.ascontiguousarray(permuted[rows])
        first: dict[bytes, int] = {}
        for r, row in zip(rows.tolist(), cand):
            first.setdefault(row.tobytes(), r)
        rows = np.fromiter(first.values(), dtype=np.intp, count=len(first))
        exact = list(map(math.fsum, (permuted[rows] * flat_f).tolist()))
        k = int(np.argmax(exact))
        if exact[k] > winner_val:
            winner, winner_val = tuple(int(x) for x in block[rows[k]]), exact[k]
    return winner_val, winner


def quotient_distance(f, g, cap: int = ENUMERATION_CAP) -> tuple[float, tuple[int, ...]]:
    """min over sigma of ||f - sigma^* g||, with the optimal sigma.

    Uses ||f||^2 + ||g||^2 - (2/n^2) max_sigma <f, sigma^* g>.
    """
    f, g = _pair(f, g)
    n = f.shape[0]
    best, sigma = max_perm_correlation(f, g, cap)
    sq = math.fsum([sum_sq(f), sum_sq(g), -2.0 * best]) / (n * n)
    return math.sqrt(max(sq, 0.0)), sigma


def linear_assignment_max(C) -> tuple[tuple[int, ...], float]:
    """Permutation maximizing sum_i C[i, sigma_i] (Hungarian-type, exact)."""
    C = np.asarray(C, dtype=float)
    rows, cols = linear_sum_assignment(C, maximize=True)
    sigma = np.empty(C.shape[0], dtype=np.intp)
    sigma[rows] = cols
    return tuple(int(x) for x in sigma), math.fsum(C[rows, cols])
