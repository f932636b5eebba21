"""Kronecker/vectorization identities, conditional spectra and the negative-type test."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import span_basis_one_perp

DEFINITENESS_RTOL = 1e-9
TENSOR_CHECK_CAP = 12


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=float), np.asarray(B, dtype=float))


def vec(A) -> np.ndarray:
    """Column-major flattening, so that vec(a b^T) == kron(b, a)."""
    return np.asarray(A, dtype=float).reshape(-1, order="F")


def trace_kron_identity_check(A, B, C, D) -> tuple[float, float]:
    """Both sides of tr(A^T B C D^T) = vec(A)^T (D kron B) vec(C)."""
    A, B, C, D = (np.asarray(x, dtype=float) for x in (A, B, C, D))
    try:
        lhs = float(np.trace(A.T @ B @ C @ D.T))
        rhs = float(vec(A) @ kron(D, B) @ vec(C))
    except ValueError as exc:
        raise ValueError(f"incompatible shapes {A.shape}, {B.shape}, {C.shape}, {D.shape}") from exc
    return lhs, rhs


@dataclass
class ConditionalSpectrum:
    eigenvalues: np.ndarray  # ascending spectrum of F^T A F
    max_eig: float
    witness: np.ndarray | None = field(default=None)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "max_eig": float(self.max_eig),
            "witness": None if self.witness is None else [float(x) for x in self.witness],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConditionalSpectrum":
        w = data.get("witness")
        return cls(np.asarray(data["eigenvalues"], dtype=float), float(data["max_eig"]),
                   None if w is None else np.asarray(w, dtype=float))


def _fix_sign(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    if nz.size and v[nz[0]] < 0:
        v = -v
    return v


def conditional_spectrum(A, F, tol: float | None = None) -> ConditionalSpectrum:
    """Spectrum of A restricted to the column span of the orthonormal basis F.

    When the largest eigenvalue exceeds ``tol`` (default: the relative
    threshold used by :func:`is_negative_type`), the unit vector ``F @ top``
    is returned as a witness of positivity.
    """
    A = np.asarray(A, dtype=float)
    F = np.asarray(F, dtype=float)
    k = F.shape[1]
    if not np.allclose(F.T @ F, np.eye(k), rtol=0, atol=1e-10):
        raise ValueError("basis is not orthonormal")
    if k == 0:
        return ConditionalSpectrum(np.zeros(0), -np.inf)
    w, V = np.linalg.eigh(F.T @ A @ F)
    top = float(w[-1])
    if tol is None:
        tol = DEFINITENESS_RTOL * max(1.0, float(np.abs(w).max()))
    witness = None
    if top > tol:
        x = F @ V[:, -1]
        witness = _fix_sign(x / np.linalg.norm(x))
    return ConditionalSpectrum(w, top, witness)


def _spectral_radius(A: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvalsh(A)).max()) if A.size else 0.0


def is_negative_type(D, tol: float = DEFINITENESS_RTOL) -> tuple[bool, ConditionalSpectrum]:
    """Is D conditionally negative semi-definite on the complement of ones?

    The verdict uses the threshold ``tol * max(1, spectral_radius(D))``.
    Works for any symmetric matrix; metric axioms are not checked here.
    """
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    if n < 2:
        return True, ConditionalSpectrum(np.zeros(0), -np.inf)
    threshold = tol * max(1.0, _spectral_radius(D))
    spec = conditional_spectrum(D, span_basis_one_perp(n), threshold)
    return spec.max_eig <= threshold, spec


def tensor_cpsd_check(DX, DY, tol: float = DEFINITENESS_RTOL) -> tuple[bool, np.ndarray]:
    """Check that DY kron DX is conditionally PSD on span(F kron F).

    Both factors must be of negative type; the product of two conditionally
    nonpositive spectra is then nonnegative.
    """
    DX = np.asarray(DX, dtype=float)
    DY = np.asarray(DY, dtype=float)
    n = DX.shape[0]
    if DY.shape != DX.shape:
        raise ValueError(f"shapes differ: {DX.shape} vs {DY.shape}")
    if n > TENSOR_CHECK_CAP:
        raise ValueError(f"tensor check is limited to n <= {TENSOR_CHECK_CAP}")
    for name, M in (("DX", DX), ("DY", DY)):
        ok, spec = is_negative_type(M, tol)
        if not ok:
            raise ValueError(f"precondition violated: {name} is not of negative type "
                             f"(max conditional eigenvalue {spec.max_eig:.3g})")
    F = span_basis_one_perp(n)
    FF = np.kron(F, F)
    w = np.linalg.eigvalsh(FF.T @ kron(DY, DX) @ FF)
    scale = max(1.0, float(np.abs(w).max()))
    return bool(w[0] >= -tol * scale), w
