import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nspaces import catalog
from nspaces.assignment import (
    EnumerationCapError,
    linear_assignment_max,
    max_perm_correlation,
    perm_correlation,
    quotient_distance,
)
from nspaces.core import l2_norm_sq, permute

from .oracles import brute_assignment_max, brute_perm_max, brute_quotient_distance


def test_perm_correlation_examples():
    e = 1 - np.eye(3)
    assert perm_correlation(e, e, (0, 1, 2)) == 6
    for sigma in [(0, 1, 2), (2, 0, 1), (1, 0, 2)]:
        assert perm_correlation(e, -e, sigma) == -6
    assert perm_correlation(np.random.default_rng(0).normal(size=(3, 3)), np.zeros((3, 3)), (1, 2, 0)) == 0


def test_max_perm_correlation_self(random_gauge):
    f = random_gauge(5)
    value, _ = max_perm_correlation(f, f)
    assert value >= perm_correlation(f, f, range(5))


@pytest.mark.parametrize("n", range(2, 7))
def test_max_perm_correlation_all_ties(n):
    f = 1 - np.eye(n)
    value, sigma = max_perm_correlation(f, -f)
    assert value == -n * (n - 1)
    assert sigma == tuple(range(n))


@pytest.mark.parametrize("seed", range(10))
def test_max_perm_correlation_matches_enumeration(seed, random_gauge):
    f, g = random_gauge(4), random_gauge(4)
    value, sigma = max_perm_correlation(f, g)
    expected, arg = brute_perm_max(f.tolist(), g.tolist())
    assert value == pytest.approx(expected, rel=1e-13)
    assert sigma == arg


def test_cap_enforced():
    with pytest.raises(EnumerationCapError):
        max_perm_correlation(np.zeros((10, 10)), np.zeros((10, 10)))
    assert max_perm_correlation(np.zeros((3, 3)), np.zeros((3, 3)), cap=3)[0] == 0


def test_quotient_distance_examples(random_gauge):
    f = random_gauge(5)
    assert quotient_distance(f, f) == (0.0, (0, 1, 2, 3, 4))
    assert quotient_distance(f, permute(f, (3, 1, 4, 0, 2)))[0] == pytest.approx(0, abs=1e-7)
    e = 1 - np.eye(2)
    assert quotient_distance(e, -e)[0] == pytest.approx(math.sqrt(2), abs=1e-15)
    for n in range(2, 7):
        e = 1 - np.eye(n)
        assert quotient_distance(e, -e)[0] == pytest.approx(2 * math.sqrt(1 - 1 / n), abs=1e-12)


@pytest.mark.parametrize("seed", range(15))
def test_expansion_identity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    a, b = np.triu(rng.normal(size=(n, n)), 1), np.triu(rng.normal(size=(n, n)), 1)
    f, g = a + a.T, b + b.T
    direct = brute_quotient_distance(f.tolist(), g.tolist()) ** 2
    best, _ = max_perm_correlation(f, g)
    expanded = l2_norm_sq(f) + l2_norm_sq(g) - 2 / n**2 * best
    assert expanded == pytest.approx(direct, rel=1e-12, abs=1e-14)
    assert quotient_distance(f, g)[0] ** 2 == pytest.approx(direct, rel=1e-12, abs=1e-14)


@given(st.integers(2, 6), st.integers(0, 10**6))
def test_quotient_distance_is_pseudometric(n, seed):
    f, g, h = (catalog.random_metric(n, (seed, k)) for k in range(3))
    dfg, dgf = quotient_distance(f, g)[0], quotient_distance(g, f)[0]
    assert dfg == pytest.approx(dgf, abs=1e-15)
    assert quotient_distance(f, h)[0] <= dfg + quotient_distance(g, h)[0] + 1e-9


def test_linear_assignment_examples():
    C = np.diag([10.0] * 4)
    assert linear_assignment_max(C) == ((0, 1, 2, 3), 40.0)
    C = np.array([[0, 0, 9], [1, 2, 0], [2, 0, 1]], dtype=float)
    sigma, value = linear_assignment_max(C)
    assert sigma[0] == 2 and value == brute_assignment_max(C.tolist())


@given(st.integers(1, 7), st.integers(0, 10**6))
def test_linear_assignment_matches_enumeration(n, seed):
    C = np.random.default_rng(seed).normal(size=(n, n))
    sigma, value = linear_assignment_max(C)
    assert sorted(sigma) == list(range(n))
    assert value == pytest.approx(brute_assignment_max(C.tolist()), rel=1e-12, abs=1e-12)
