"""Euclidean embeddability of finite metric spaces.

The Gram matrix uses the last point as base point:

    G_ij = (d(x_i, x_m)^2 + d(x_j, x_m)^2 - d(x_i, x_j)^2) / 2,  i, j < m.

A space is Euclidean iff G is positive semi-definite; ``(X, sqrt(d))`` is
Euclidean iff ``(X, d)`` is of negative type.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import power_transform, span_basis_one_perp
from .spectral import DEFINITENESS_RTOL, conditional_spectrum, is_negative_type

SCHOENBERG_GRID = tuple(np.logspace(-3, 3, 17))


class EmbeddingError(ValueError):
    def __init__(self, message: str, eigenvalue: float):
        super().__init__(message)
        self.eigenvalue = eigenvalue


def gram(D) -> np.ndarray:
    D = np.asarray(D, dtype=float)
    m = D.shape[0]
    if m < 2:
        raise ValueError("Gram matrix needs at least two points")
    sq = D * D
    base = sq[:-1, -1]
    return 0.5 * (base[:, None] + base[None, :] - sq[:-1, :-1])


def distances_from_gram(G, tol: float = 1e-12) -> np.ndarray:
    """Invert :func:`gram`; the base point becomes the last point."""
    G = np.atleast_2d(np.asarray(G, dtype=float))
    k = G.shape[0]
    diag = np.diag(G)
    sq = np.zeros((k + 1, k + 1))
    sq[:k, :k] = diag[:, None] + diag[None, :] - 2.0 * G
    sq[:k, k] = sq[k, :k] = diag
    np.fill_diagonal(sq, 0.0)
    floor = -tol * max(1.0, float(np.abs(G).max()) if G.size else 1.0)
    if sq.min() < floor:
        raise ValueError(f"negative squared distance {sq.min():.3g}; input is not a Gram matrix")
    return np.sqrt(np.clip(sq, 0.0, None))


@dataclass(frozen=True)
class PsdReport:
    is_psd: bool
    rank: int
    spectrum: np.ndarray  # ascending


def psd_rank(G, tol: float = DEFINITENESS_RTOL) -> PsdReport:
    G = np.atleast_2d(np.asarray(G, dtype=float))
    w = np.linalg.eigvalsh(G)
    scale = max(1.0, float(w[-1]))
    return PsdReport(bool(w[0] >= -tol * scale), int(np.sum(w > tol * scale)), w)


@dataclass
class Embedding:
    points: np.ndarray  # m x dim
    dim: int

    def to_dict(self) -> dict:
        return {"dim": self.dim, "points": self.points.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Embedding":
        pts = np.asarray(data["points"], dtype=float).reshape(len(data["points"]), data["dim"])
        return cls(pts, int(data["dim"]))

    def distances(self) -> np.ndarray:
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.sqrt((diff * diff).sum(axis=-1))


def embed(D, tol: float = DEFINITENESS_RTOL) -> Embedding:
    """Isometric embedding into R^rank via the eigendecomposition of the Gram matrix.

    The last point sits at the origin. Eigendecomposition handles rank
    deficient Gram matrices, which a Cholesky factorization does not.
    """
    D = np.asarray(D, dtype=float)
    m = D.shape[0]
    if m == 1:
        return Embedding(np.zeros((1, 0)), 0)
    G = gram(D)
    w, V = np.linalg.eigh(G)
    scale = max(1.0, float(w[-1]))
    if w[0] < -tol * scale:
        raise EmbeddingError(f"Gram matrix is not PSD (eigenvalue {w[0]:.6g})", float(w[0]))
    keep = w > tol * scale
    coords = V[:, keep] * np.sqrt(w[keep])
    points = np.vstack([coords, np.zeros((1, coords.shape[1]))])
    return Embedding(points, int(keep.sum()))


def is_euclidean(D, tol: float = DEFINITENESS_RTOL) -> bool:
    D = np.asarray(D, dtype=float)
    if D.shape[0] < 2:
        return True
    return psd_rank(gram(D), tol).is_psd


def squared_form_nonpositive(D, tol: float = DEFINITENESS_RTOL) -> bool:
    """sum_ij eta_i eta_j d_ij^2 <= 0 for all eta summing to zero.

    The entrywise square of D is only a gauge here, never validated as a metric.
    """
    return is_negative_type(np.asarray(D, dtype=float) ** 2, tol)[0]


def schoenberg_check(D, lambdas=SCHOENBERG_GRID, tol: float = DEFINITENESS_RTOL) -> bool:
    """Conditional PSD-ness of exp(-lambda * D**2) on the ones-complement, for each lambda.

    The property must hold for every lambda > 0, so a finite grid can refute
    Euclidean-ness but never prove it.
    """
    D = np.asarray(D, dtype=float)
    lambdas = list(lambdas)
    if not lambdas:
        raise ValueError("need at least one lambda")
    n = D.shape[0]
    if n < 2:
        return True
    F = span_basis_one_perp(n)
    sq = D * D
    for lam in lambdas:
        if lam <= 0:
            raise ValueError("lambdas must be positive")
        spec = conditional_spectrum(np.exp(-lam * sq), F, tol=np.inf)
        if spec.eigenvalues[0] < -tol:
            return False
    return True


@dataclass(frozen=True)
class SqrtLinkReport:
    sqrt_euclidean: bool
    negative_type: bool

    @property
    def agree(self) -> bool:
        return self.sqrt_euclidean == self.negative_type


def negative_type_sqrt_consistency(D, tol: float = DEFINITENESS_RTOL) -> SqrtLinkReport:
    return SqrtLinkReport(is_euclidean(power_transform(D, 0.5), tol), is_negative_type(D, tol)[0])


def power_preserves_euclidean_check(D, c: float, tol: float = DEFINITENESS_RTOL) -> bool:
    if not is_euclidean(D, tol):
        raise ValueError("precondition violated: input metric is not Euclidean")
    return is_euclidean(power_transform(D, c), tol)
