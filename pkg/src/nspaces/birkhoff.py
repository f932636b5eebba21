"""Coupling side: doubly stochastic matrices, the quadratic objective, Frank-Wolfe.

The objective over the Birkhoff polytope is

    h(P) = sum_{ijkl} DX_ij DY_kl P_ik P_jl = tr(P^T DX P DY^T)

and the L2-distortion distance between two gauged n-point spaces is

    delta^2 = ||f||^2 + ||g||^2 - (2/n^2) max_P h(P).

The maximization is nonconvex in general, so :func:`frank_wolfe_max` only
produces a lower bound on max h (hence an upper bound on delta). A coupling
that beats the exact permutation maximum is a rigorous witness of a gap; the
absence of one proves nothing unless both inputs are of negative type, in
which case h is convex on the polytope and the maximum sits at a vertex.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import spectral
from .assignment import (
    ENUMERATION_CAP,
    linear_assignment_max,
    max_perm_correlation,
    sum_sq,
)
from .core import DimensionMismatchError, permutation_matrix, span_basis_one_perp

__all__ = [
    "Certificate",
    "FWResult",
    "GapReport",
    "bvn_decompose",
    "check_bistochastic",
    "distortion_distance",
    "distortion_objective",
    "frank_wolfe_max",
    "h_objective",
    "quadratic_line_search",
    "sinkhorn",
    "span_basis_one_perp",
]

BISTOCHASTIC_TOL = 1e-12
CERT_TOL = 1e-7
DEFAULT_RESTARTS = 16
DEFAULT_MAX_ITERS = 200
DEFAULT_FW_TOL = 1e-10


def check_bistochastic(P, tol: float = BISTOCHASTIC_TOL) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {P.shape}")
    if np.any(P < -tol):
        raise ValueError("coupling has negative entries")
    rows = np.abs(P.sum(axis=1) - 1).max()
    cols = np.abs(P.sum(axis=0) - 1).max()
    if max(rows, cols) > tol:
        raise ValueError(f"not doubly stochastic (row error {rows:.3g}, column error {cols:.3g})")
    return P


def sinkhorn(A, tol: float = 1e-15, max_iter: int = 10_000) -> np.ndarray:
    """Alternately normalize rows and columns of a positive matrix."""
    P = np.array(A, dtype=float)
    if np.any(P <= 0):
        raise ValueError("Sinkhorn normalization needs a strictly positive matrix")
    for _ in range(max_iter):
        P /= P.sum(axis=1, keepdims=True)
        P /= P.sum(axis=0, keepdims=True)
        if np.abs(P.sum(axis=1) - 1).max() <= tol:
            break
    return P


def _triple(DX, DY, P=None):
    DX = np.asarray(DX, dtype=float)
    DY = np.asarray(DY, dtype=float)
    if DX.shape != DY.shape:
        raise DimensionMismatchError(f"shapes differ: {DX.shape} vs {DY.shape}")
    if P is not None:
        P = np.asarray(P, dtype=float)
        if P.shape != DX.shape:
            raise DimensionMismatchError(f"coupling shape {P.shape} does not match {DX.shape}")
    return DX, DY, P


def h_objective(DX, DY, P) -> float:
    """tr(P^T DX P DY^T), with the final contraction summed by ``math.fsum``.

    At a permutation matrix this is exactly ``perm_correlation``.
    """
    DX, DY, P = _triple(DX, DY, P)
    return math.fsum((P.T @ DX @ P * DY).ravel())


def _h_fast(DX, DY, P) -> float:
    return float(np.sum(P.T @ DX @ P * DY))


def distortion_objective(f, g, P) -> float:
    """(1/n^2) sum_{ijkl} (f_ij - g_kl)^2 P_ik P_jl, evaluated as the quadruple sum."""
    f, g, P = _triple(f, g, P)
    n = f.shape[0]
    diff = f[:, :, None, None] - g[None, None, :, :]
    terms = diff * diff * P[:, None, :, None] * P[None, :, None, :]
    return math.fsum(terms.ravel()) / (n * n)


def quadratic_line_search(a: float, b: float) -> float:
    """Maximizer on [0, 1] of q(t) = a t^2 + b t.

    With a >= 0 the maximum is at an endpoint; otherwise the interior critical
    point -b / (2a) competes with both endpoints.
    """
    candidates = [0.0, 1.0]
    if a < 0:
        t = -b / (2 * a)
        if 0 < t < 1:
            candidates.append(t)
    return max(candidates, key=lambda t: a * t * t + b * t)


@dataclass
class FWResult:
    coupling: np.ndarray
    value: float
    trace: list[dict] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return sum(r["iterations"] for r in self.trace)


def _restart_rng(seed, restart: int) -> np.random.Generator:
    key = list(seed) if isinstance(seed, (list, tuple)) else [int(seed)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([*key, restart])))


def _fw_ascent(DX, DY, P, max_iters: int, tol: float) -> tuple[np.ndarray, float, dict]:
    n = P.shape[0]
    rows = np.arange(n)
    start = P
    # q(t) = value + gap t + curv t^2 tracks h along the segment; h itself is
    # recomputed exactly once the restart ends
    value = _h_fast(DX, DY, P)
    values = [value]
    gap = math.inf
    it = 0
    converged = False
    while it < max_iters:
        it += 1
        grad = 2.0 * DX @ P @ DY
        _, cols = linear_sum_assignment(grad, maximize=True)
        step = -P
        step[rows, cols] += 1.0
        gap = float(np.sum(grad * step))
        if gap <= tol:
            converged = True
            break
        curv = _h_fast(DX, DY, step)
        t = quadratic_line_search(curv, gap)
        gain = gap * t + curv * t * t
        if t == 0.0 or gain <= 1e-15 * max(1.0, abs(value)):
            converged = True
            break
        P = P + t * step
        value += gain
        values.append(value)
    start_value = h_objective(DX, DY, start)
    value = h_objective(DX, DY, P)
    if value < start_value:
        P, value = start, start_value
    return P, value, {"iterations": it, "value": value, "gap": gap,
                      "converged": converged, "values": values}


def frank_wolfe_max(
    DX,
    DY,
    restarts: int = DEFAULT_RESTARTS,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_FW_TOL,
    seed: int | Sequence[int] = 0,
    start_perm: Sequence[int] | None = None,
) -> FWResult:
    """Multi-start Frank-Wolfe ascent of h over the Birkhoff polytope.

    Restart 0 starts at the permutation matrix of ``start_perm`` (computed by
    exact enumeration when omitted and n is within the enumeration cap,
    identity otherwise), restart 1 at the uniform matrix, the rest at random
    Sinkhorn-normalized matrices drawn from the stream ``(seed, restart)``.
    Returns the best coupling found; its value is a lower bound on max h.
    """
    DX, DY, _ = _triple(DX, DY)
    if restarts < 1:
        raise ValueError("need at least one restart")
    n = DX.shape[0]
    if start_perm is None:
        start_perm = max_perm_correlation(DX, DY)[1] if n <= ENUMERATION_CAP else tuple(range(n))
    best: FWResult | None = None
    trace = []
    for r in range(restarts):
        if r == 0:
            P0, kind = permutation_matrix(start_perm), "permutation"
        elif r == 1:
            P0, kind = np.full((n, n), 1.0 / n), "uniform"
        else:
            rng = _restart_rng(seed, r)
            P0, kind = sinkhorn(rng.uniform(0.05, 1.0, size=(n, n))), "random"
        P, value, info = _fw_ascent(DX, DY, P0, max_iters, tol)
        info.update(restart=r, start=kind)
        trace.append(info)
        if best is None or value > best.value:
            best = FWResult(P, value)
    best.trace = trace
    return best


class Certificate(str, enum.Enum):
    EQUALITY_BY_NEGATIVE_TYPE = "EqualityByNegativeType"
    NUMERICAL_EQUALITY = "NumericalEquality"
    STRICT_GAP_WITNESS = "StrictGapWitness"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class GapReport:
    d_quotient: float
    delta_estimate: float
    perm_max: float
    perm: tuple[int, ...]
    fw_value: float
    fw_coupling: np.ndarray
    certificate: Certificate
    gap: float
    iterations: int = 0
    restarts: int = 0
    seed: int | list[int] = 0

    def to_dict(self) -> dict:
        return {
            "d_quotient": self.d_quotient,
            "delta_estimate": self.delta_estimate,
            "perm_max": self.perm_max,
            "perm": [i + 1 for i in self.perm],
            "fw_value": self.fw_value,
            "fw_coupling": self.fw_coupling.tolist(),
            "certificate": self.certificate.value,
            "gap": self.gap,
            "solver": {"iterations": self.iterations, "restarts": self.restarts,
                       "seed": self.seed},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GapReport":
        solver = data.get("solver", {})
        return cls(
            d_quotient=data["d_quotient"],
            delta_estimate=data["delta_estimate"],
            perm_max=data["perm_max"],
            perm=tuple(i - 1 for i in data["perm"]),
            fw_value=data["fw_value"],
            fw_coupling=np.asarray(data["fw_coupling"], dtype=float),
            certificate=Certificate(data["certificate"]),
            gap=data["gap"],
            iterations=solver.get("iterations", 0),
            restarts=solver.get("restarts", 0),
            seed=solver.get("seed", 0),
        )


def distortion_distance(
    f,
    g,
    restarts: int = DEFAULT_RESTARTS,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_FW_TOL,
    seed: int | Sequence[int] = 0,
    cert_tol: float = CERT_TOL,
    cap: int = ENUMERATION_CAP,
) -> GapReport:
    """Compare the quotient distance with the Frank-Wolfe estimate of delta."""
    f, g, _ = _triple(f, g)
    n = f.shape[0]
    perm_max, perm = max_perm_correlation(f, g, cap)
    fw = frank_wolfe_max(f, g, restarts, max_iters, tol, seed, start_perm=perm)
    sf, sg = sum_sq(f), sum_sq(g)
    d_quotient = math.sqrt(max(math.fsum([sf, sg, -2.0 * perm_max]) / n**2, 0.0))
    delta = math.sqrt(max(math.fsum([sf, sg, -2.0 * fw.value]) / n**2, 0.0))
    gap = fw.value - perm_max
    if spectral.is_negative_type(f)[0] and spectral.is_negative_type(g)[0]:
        cert = Certificate.EQUALITY_BY_NEGATIVE_TYPE
    elif abs(gap) <= cert_tol:
        cert = Certificate.NUMERICAL_EQUALITY
    elif gap > cert_tol:
        cert = Certificate.STRICT_GAP_WITNESS
    else:
        cert = Certificate.INCONCLUSIVE
    return GapReport(
        d_quotient=d_quotient,
        delta_estimate=delta,
        perm_max=perm_max,
        perm=perm,
        fw_value=fw.value,
        fw_coupling=fw.coupling,
        certificate=cert,
        gap=gap,
        iterations=fw.iterations,
        restarts=restarts,
        seed=list(seed) if isinstance(seed, (list, tuple)) else seed,
    )


def bvn_decompose(P, tol: float = 1e-12) -> list[tuple[float, tuple[int, ...]]]:
    """Birkhoff-von Neumann decomposition: P = sum_k w_k * PermMatrix(sigma_k).

    Each round matches rows to columns on the support {P > tol}, subtracts the
    smallest matched entry along that permutation and zeroes entries that
    fall below ``tol``.
    """
    R = np.array(check_bistochastic(P, max(tol, BISTOCHASTIC_TOL) * 1e2), dtype=float)
    n = R.shape[0]
    R[R <= tol] = 0.0
    terms: list[tuple[float, tuple[int, ...]]] = []
    rows = np.arange(n)
    while R.max() > tol:
        sigma, size = linear_assignment_max((R > tol).astype(float))
        matched = R[rows, list(sigma)]
        if size < n:
            if R.sum() <= n * 1e-9:
                break  # leftover roundoff mass
            raise ValueError("no perfect matching on the support; input is not doubly stochastic")
        w = float(matched.min())
        terms.append((w, sigma))
        R[rows, list(sigma)] -= w
        R[R <= tol] = 0.0
    return terms
