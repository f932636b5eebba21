"""Gauge and distance matrices on n-point spaces.

Matrices are plain float64 numpy arrays. The constructors below validate and
normalize them and return read-only copies, so the rest of the package can
treat them as immutable values.

Permutations are integer sequences ``sigma`` with 0-based entries; ``sigma[i]``
is the image of point ``i``. User-facing reports shift to 1-based indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

SYMMETRY_RTOL = 1e-12
METRIC_TOL = 1e-9


class InvalidMatrixError(ValueError):
    """Raised when an input cannot be interpreted as a gauge/distance matrix."""


class DimensionMismatchError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def gauge_matrix(entries) -> np.ndarray:
    """Return a validated, read-only gauge matrix (symmetric, null diagonal).

    Asymmetry or diagonal values up to ``1e-12`` relative to the largest entry
    are treated as noise and removed; anything larger is rejected.
    """
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidMatrixError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrixError("matrix contains NaN or Inf")
    scale = max(1.0, float(np.max(np.abs(a))))
    asym = float(np.max(np.abs(a - a.T)))
    if asym > SYMMETRY_RTOL * scale:
        raise InvalidMatrixError(f"matrix is not symmetric (max |f_ij - f_ji| = {asym:.3g})")
    diag = float(np.max(np.abs(np.diag(a))))
    if diag > SYMMETRY_RTOL * scale:
        raise InvalidMatrixError(f"matrix has a non-null diagonal (max |f_ii| = {diag:.3g})")
    if asym > 0:
        a = (a + a.T) / 2
    np.fill_diagonal(a, 0.0)
    return _frozen(a)


@dataclass(frozen=True)
class MetricCheck:
    ok: bool
    # 1-based (i, j, k) with d_ij > d_ik + d_kj + tol, or (i, j, j) for a negative entry
    violation: tuple[int, int, int] | None = None
    excess: float = 0.0

    def __bool__(self) -> bool:
        return self.ok


def validate_metric(f, tol: float = METRIC_TOL) -> MetricCheck:
    """Check nonnegativity and all n^3 triangle inequalities up to ``tol``.

    The worst violation is reported (1-based). Failure is a result, not an
    exception.
    """
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    neg = np.argmin(f)
    if f.flat[neg] < -tol:
        i, j = divmod(int(neg), n)
        return MetricCheck(False, (i + 1, j + 1, j + 1), float(-f.flat[neg]))
    # excess[i, k, j] = d_ij - d_ik - d_kj
    excess = f[:, None, :] - f[:, :, None] - f[None, :, :]
    worst = int(np.argmax(excess))
    value = float(excess.flat[worst])
    if value > tol:
        i, k, j = np.unravel_index(worst, excess.shape)
        return MetricCheck(False, (int(i) + 1, int(j) + 1, int(k) + 1), value)
    return MetricCheck(True)


def distance_matrix(entries, tol: float = METRIC_TOL) -> np.ndarray:
    """Like :func:`gauge_matrix` but also requires the (pseudo-)metric axioms."""
    d = gauge_matrix(entries)
    check = validate_metric(d, tol)
    if not check:
        raise InvalidMatrixError(
            f"not a metric: violation at (i, j, k) = {check.violation}, excess {check.excess:.3g}"
        )
    return d


def l2_norm_sq(f) -> float:
    """Squared l2-norm with the 1/n^2 normalization: (1/n^2) sum_ij f_ij^2."""
    f = np.asarray(f, dtype=float)
    return math.fsum((f * f).ravel()) / f.shape[0] ** 2


def check_permutation(sigma: Sequence[int], n: int | None = None) -> np.ndarray:
    s = np.asarray(sigma, dtype=np.intp)
    if s.ndim != 1:
        raise ValueError("permutation must be one-dimensional")
    if n is not None and s.size != n:
        raise DimensionMismatchError(f"permutation of size {s.size} used with n = {n}")
    if not np.array_equal(np.sort(s), np.arange(s.size)):
        raise ValueError(f"not a permutation of 0..{s.size - 1}: {list(s)}")
    return s


def compose(sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """Return sigma o tau, i.e. i -> sigma[tau[i]]."""
    s = check_permutation(sigma)
    t = check_permutation(tau, s.size)
    return tuple(int(x) for x in s[t])


def inverse(sigma: Sequence[int]) -> tuple[int, ...]:
    s = check_permutation(sigma)
    inv = np.empty_like(s)
    inv[s] = np.arange(s.size)
    return tuple(int(x) for x in inv)


def permute(g, sigma: Sequence[int]) -> np.ndarray:
    """Relabel points: ``result[i, j] = g[sigma[i], sigma[j]]``.

    This is a right action: ``permute(permute(g, s), t) == permute(g, compose(s, t))``.
    """
    g = np.asarray(g, dtype=float)
    s = check_permutation(sigma, g.shape[0])
    return _frozen(g[np.ix_(s, s)].copy())


def permutation_matrix(sigma: Sequence[int]) -> np.ndarray:
    """P with P[i, sigma[i]] = 1."""
    s = check_permutation(sigma)
    P = np.zeros((s.size, s.size))
    P[np.arange(s.size), s] = 1.0
    return P


def power_transform(d, c: float) -> np.ndarray:
    """Entrywise d_ij ** c for 0 < c <= 1; the result is again a metric."""
    if not 0 < c <= 1:
        raise ValueError(f"power must lie in (0, 1], got {c}")
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise InvalidMatrixError("power transform needs nonnegative distances")
    out = np.power(d, c)
    np.fill_diagonal(out, 0.0)
    return _frozen(out)


def span_basis_one_perp(n: int) -> np.ndarray:
    """Orthonormal basis (n x (n-1)) of the hyperplane orthogonal to the ones vector.

    Built from the Householder reflector that maps ones/sqrt(n) to e_1; its
    columns 2..n span the complement of ones.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    v = np.full(n, 1.0 / math.sqrt(n))
    v[0] -= 1.0
    H = np.eye(n) - 2.0 * np.outer(v, v) / (v @ v)
    return H[:, 1:].copy()
