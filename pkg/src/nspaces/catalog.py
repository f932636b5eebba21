"""Named spaces, counterexamples and seeded random generators.

Randomness goes through :func:`make_rng`: a PCG64 generator keyed by a
``SeedSequence`` built from the seed followed by any stream indices, so
``make_rng(seed, trial, draw)`` gives independent, reproducible streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import gauge_matrix

RAW_RANGE = (0.1, 1.0)
CLOUD_BOX = (0.0, 1.0)


def _key(seed) -> list[int]:
    if isinstance(seed, (list, tuple)):
        return [int(s) for s in seed]
    return [int(seed)]


def make_rng(seed: int | Sequence[int], *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_key(seed) + list(stream))))


@dataclass(frozen=True)
class GaugedCounterexample:
    f: np.ndarray
    g: np.ndarray
    expected_quotient: float
    # distortion at the uniform coupling; equals the L2-distortion distance
    expected_coupling_bound: float


def gauged_counterexample(n: int) -> GaugedCounterexample:
    """f = indicator(i != j), g = -f.

    The quotient distance is 2 sqrt(1 - 1/n). The uniform coupling gives
    squared distortion 2(1 - 1/n) + 2(1 - 1/n)^2 = 4 - 6/n + 2/n^2, which is
    strictly smaller for every n >= 2.
    """
    if n < 2:
        raise ValueError("the counterexample needs n >= 2")
    f = gauge_matrix(1.0 - np.eye(n))
    g = gauge_matrix(-(1.0 - np.eye(n)))
    return GaugedCounterexample(
        f, g, 2.0 * math.sqrt(1.0 - 1.0 / n), math.sqrt(4.0 - 6.0 / n + 2.0 / n**2)
    )


def k32_space() -> tuple[np.ndarray, np.ndarray]:
    """Shortest-path metric of K_{3,2} and a vector eta (sum 0) with eta^T D eta = 2."""
    D = gauge_matrix([
        [0, 2, 2, 1, 1],
        [2, 0, 2, 1, 1],
        [2, 2, 0, 1, 1],
        [1, 1, 1, 0, 2],
        [1, 1, 1, 2, 0],
    ])
    eta = np.array([1.0, 1.0, 1.0, -1.0, -2.0])
    return D, eta


def mr_space(r: int) -> np.ndarray:
    """r points at mutual distance 2 plus two points at distance 1 from everything.

    Not of negative type for r > 4; smaller r are rejected.
    """
    if r <= 4:
        raise ValueError(f"r must exceed 4 (got {r}); for r <= 4 the space need not fail negative type")
    n = r + 2
    D = 1.0 - np.eye(n)
    D[:r, :r] *= 2.0
    return gauge_matrix(D)


def shortest_path_closure(D) -> np.ndarray:
    """Floyd-Warshall closure; a fixed point on matrices that are already metrics."""
    D = np.array(D, dtype=float)
    for k in range(D.shape[0]):
        np.minimum(D, D[:, k, None] + D[None, k, :], out=D)
    return D


def random_metric(n: int, seed: int | Sequence[int]) -> np.ndarray:
    """Symmetric raw draw in [0.1, 1.0) repaired by shortest-path closure.

    The closure biases toward path-like metrics but always yields a valid one.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rng = make_rng(seed)
    raw = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    raw[iu] = rng.uniform(*RAW_RANGE, size=len(iu[0]))
    raw = raw + raw.T
    return gauge_matrix(shortest_path_closure(raw))


def random_point_cloud(n: int, dim: int, seed: int | Sequence[int]) -> np.ndarray:
    if n < 2 or dim < 1:
        raise ValueError("need n >= 2 and dim >= 1")
    return make_rng(seed).uniform(*CLOUD_BOX, size=(n, dim))


def cloud_distances(points) -> np.ndarray:
    x = np.asarray(points, dtype=float)
    diff = x[:, None, :] - x[None, :, :]
    return gauge_matrix(np.sqrt((diff * diff).sum(axis=-1)))


def random_point_cloud_metric(n: int, dim: int, seed: int | Sequence[int]) -> np.ndarray:
    """Euclidean distances of n points drawn uniformly from the unit box in R^dim."""
    return cloud_distances(random_point_cloud(n, dim, seed))
