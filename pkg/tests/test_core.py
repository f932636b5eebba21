import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nspaces import catalog
from nspaces.core import (
    InvalidMatrixError,
    compose,
    distance_matrix,
    gauge_matrix,
    l2_norm_sq,
    permutation_matrix,
    permute,
    power_transform,
    span_basis_one_perp,
    validate_metric,
)

perms = st.integers(2, 7).flatmap(lambda n: st.permutations(list(range(n))))


def test_l2_norm_examples():
    assert l2_norm_sq(np.zeros((4, 4))) == 0
    assert l2_norm_sq([[0, 1], [1, 0]]) == 0.5
    assert l2_norm_sq(1 - np.eye(3)) == pytest.approx(2 / 3, abs=1e-15)


def test_gauge_matrix_symmetrizes_noise_only():
    a = np.array([[0, 1, 2], [1 + 1e-14, 0, 3], [2, 3, 0]])
    g = gauge_matrix(a)
    assert np.array_equal(g, g.T)
    with pytest.raises(InvalidMatrixError, match="symmetric"):
        gauge_matrix([[0, 1], [1.1, 0]])
    with pytest.raises(InvalidMatrixError, match="diagonal"):
        gauge_matrix([[1, 1], [1, 0]])
    with pytest.raises(InvalidMatrixError, match="NaN"):
        gauge_matrix([[0, np.nan], [np.nan, 0]])
    assert not g.flags.writeable


def test_permute_examples():
    g = np.array([[0, 1, 2], [1, 0, 3], [2, 3, 0]], dtype=float)
    assert np.array_equal(permute(g, (0, 1, 2)), g)
    h = permute(g, (1, 0, 2))
    assert (h[0, 1], h[0, 2], h[1, 2]) == (1, 3, 2)
    c = 1 - np.eye(5)
    assert np.array_equal(permute(c, (3, 1, 4, 0, 2)), c)


def test_permute_rejects_wrong_size():
    with pytest.raises(ValueError):
        permute(np.zeros((3, 3)), (0, 1))


@given(perms, st.data())
def test_action_is_isometric_and_right_action(sigma, data):
    n = len(sigma)
    tau = data.draw(st.permutations(list(range(n))))
    vals = data.draw(st.lists(st.floats(-5, 5), min_size=n * n, max_size=n * n))
    a = np.triu(np.array(vals).reshape(n, n), 1)
    g = a + a.T
    assert l2_norm_sq(permute(g, sigma)) == pytest.approx(l2_norm_sq(g), rel=1e-12, abs=1e-300)
    assert np.array_equal(permute(permute(g, sigma), tau), permute(g, compose(sigma, tau)))


def test_permutation_matrix_convention():
    P = permutation_matrix((2, 0, 1))
    assert P[0, 2] == P[1, 0] == P[2, 1] == 1
    g = np.arange(9.0).reshape(3, 3)
    # P g P^T relabels like sigma^{-1}; P^T g P relabels like sigma
    assert np.array_equal(P @ g @ P.T, g[np.ix_((2, 0, 1), (2, 0, 1))])


def test_validate_metric_examples():
    assert validate_metric(1 - np.eye(4))
    bad = validate_metric([[0, 5, 1], [5, 0, 1], [1, 1, 0]])
    assert not bad and bad.violation == (1, 2, 3) and bad.excess == pytest.approx(3)
    assert validate_metric(catalog.k32_space()[0])
    neg = validate_metric([[0, -1], [-1, 0]])
    assert not neg


def test_distance_matrix_rejects_non_metric():
    with pytest.raises(InvalidMatrixError, match="violation"):
        distance_matrix([[0, 5, 1], [5, 0, 1], [1, 1, 0]])


def test_power_transform_examples():
    D = np.array([[0, 3, 4], [3, 0, 5], [4, 5, 0]], dtype=float)
    assert np.array_equal(power_transform(D, 1), D)
    H = power_transform(D, 0.5)
    assert np.allclose([H[0, 1], H[0, 2], H[1, 2]], [math.sqrt(3), 2, math.sqrt(5)])
    assert H[0, 1] + H[0, 2] > H[1, 2]
    assert np.allclose(power_transform(4 * (1 - np.eye(3)), 0.5), 2 * (1 - np.eye(3)))
    for c in (0, -1, 1.5):
        with pytest.raises(ValueError):
            power_transform(D, c)


@given(st.integers(2, 9), st.integers(0, 10**6), st.floats(1e-3, 1.0))
def test_power_transform_keeps_metric(n, seed, c):
    assert validate_metric(power_transform(catalog.random_metric(n, seed), c))


@given(st.floats(1e-3, 10), st.floats(1e-3, 10), st.floats(0, 1), st.floats(0.01, 0.99))
def test_power_inequality_strict(p, q, frac, c):
    r = frac * (p + q)
    assert p**c + q**c > r**c


@pytest.mark.parametrize("n", range(2, 10))
def test_one_perp_basis(n):
    F = span_basis_one_perp(n)
    assert F.shape == (n, n - 1)
    assert np.allclose(F.T @ F, np.eye(n - 1), atol=1e-12)
    assert np.allclose(F.T @ np.ones(n), 0, atol=1e-12)
    FF = np.kron(F, F)
    assert np.allclose(FF.T @ FF, np.eye((n - 1) ** 2), atol=1e-12)


def test_one_perp_basis_n2():
    F = span_basis_one_perp(2)
    assert np.allclose(np.abs(F[:, 0]), [1 / math.sqrt(2)] * 2)
    assert F[0, 0] == pytest.approx(-F[1, 0])
