"""Reproducible acceptance checks, shared by ``nspaces verify-paper`` and the test suite.

Every check is deterministic (fixed seeds) and carries its own runtime budget.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import birkhoff, catalog, euclidean, spectral
from .assignment import quotient_distance
from .birkhoff import Certificate
from .core import gauge_matrix, permutation_matrix, power_transform, validate_metric
from .search import SearchParams, counterexample_search

SEED = 20231


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.number:>2}. {self.title}: {self.detail} "
                f"({self.seconds:.3g}s / budget {self.budget:g}s)")


def _timed(number: int, title: str, budget: float, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    if elapsed > budget:
        ok = False
        detail += "; runtime budget exceeded"
    return CriterionResult(number, title, ok, detail, elapsed, budget)


def random_gauge(n: int, seed) -> np.ndarray:
    rng = catalog.make_rng(seed)
    a = rng.normal(size=(n, n))
    a = np.triu(a, 1)
    return gauge_matrix(a + a.T)


def negative_type_metric(n: int, seed) -> np.ndarray:
    """Draw from a mixed corpus, keeping only negative-type matrices."""
    for attempt in itertools.count():
        key = [*seed, attempt] if isinstance(seed, (list, tuple)) else [seed, attempt]
        rng = catalog.make_rng(key)
        kind = int(rng.integers(3))
        if kind == 0:
            D = catalog.random_point_cloud_metric(n, int(rng.integers(1, 6)), key)
        elif kind == 1:
            D = power_transform(catalog.random_point_cloud_metric(n, 3, key), float(rng.uniform(0.2, 1.0)))
        else:
            D = catalog.random_metric(n, key)
        if spectral.is_negative_type(D)[0]:
            return D
    raise AssertionError("unreachable")


def random_bistochastic(n: int, seed) -> np.ndarray:
    rng = catalog.make_rng(seed)
    k = int(rng.integers(1, n + 1))
    w = rng.dirichlet(np.ones(k))
    P = sum(wi * permutation_matrix(rng.permutation(n)) for wi in w)
    eps = float(rng.uniform(0, 0.3))
    noise = birkhoff.sinkhorn(rng.uniform(0.05, 1.0, size=(n, n)))
    return birkhoff.sinkhorn((1 - eps) * P + eps * noise) if eps > 0 else P


def sqrt_link_corpus(size: int = 1000) -> list[np.ndarray]:
    D, _ = catalog.k32_space()
    corpus = [D] + [catalog.mr_space(r) for r in range(5, 9)]
    i = 0
    while len(corpus) < size:
        n = 2 + i % 8
        kind = i % 4
        if kind == 0:
            corpus.append(catalog.random_metric(n, (SEED, 10, i)))
        elif kind == 1:
            corpus.append(catalog.random_point_cloud_metric(n, 1 + i % 5, (SEED, 10, i)))
        elif kind == 2:
            # graph metrics of random connected graphs, a rich source of non-negative type
            rng = catalog.make_rng((SEED, 10, i))
            A = np.where(rng.random((n, n)) < 0.5, 1.0, np.inf)
            A = np.minimum(A, A.T)
            A[np.arange(n - 1), np.arange(1, n)] = A[np.arange(1, n), np.arange(n - 1)] = 1.0
            np.fill_diagonal(A, 0.0)
            corpus.append(gauge_matrix(catalog.shortest_path_closure(A)))
        else:
            c = [0.25, 0.5, 0.75, 1.0][(i // 4) % 4]
            corpus.append(power_transform(catalog.random_metric(n, (SEED, 11, i)), c))
        i += 1
    return corpus


def criterion_1() -> CriterionResult:
    def body():
        from .cli import compare_matrices

        failures = []
        for n in range(2, 9):
            ex = catalog.gauged_counterexample(n)
            dq, _ = quotient_distance(ex.f, ex.g)
            if abs(dq - 2 * math.sqrt(1 - 1 / n)) > 1e-12:
                failures.append(f"n={n}: quotient {dq!r}")
            uniform = np.full((n, n), 1.0 / n)
            obj = birkhoff.distortion_objective(ex.f, ex.g, uniform)
            stated = 4 - 6 / n + 1 / n**2
            if abs(obj - stated) > 1e-12:
                failures.append(f"n={n}: uniform distortion {obj:.12g} != 4-6/n+1/n^2 = {stated:.12g}")
            if not obj < dq**2:
                failures.append(f"n={n}: gap not strict")
            rep = compare_matrices(ex.f, ex.g, gauged=True, seed=SEED)
            if rep.certificate is not Certificate.STRICT_GAP_WITNESS:
                failures.append(f"n={n}: compare gave {rep.certificate.value}")
        return not failures, "; ".join(failures) or "n=2..8 exact"
    return _timed(1, "gauged counterexample", 1.0, body)


def criterion_2() -> CriterionResult:
    def body():
        D, eta = catalog.k32_space()
        q = float(eta @ D @ eta)
        ok, spec = spectral.is_negative_type(D)
        passed = q == 2.0 and not ok and spec.max_eig > 0
        return passed, f"eta^T D eta = {q:g}, max conditional eigenvalue {spec.max_eig:.6g}"
    return _timed(2, "K_{3,2} not of negative type", 0.1, body)


def criterion_3() -> CriterionResult:
    def body():
        verdicts = {r: spectral.is_negative_type(catalog.mr_space(r))[0] for r in range(5, 9)}
        return not any(verdicts.values()), f"negative type verdicts {verdicts}"
    return _timed(3, "M_r family not of negative type", 0.1, body)


def criterion_4() -> CriterionResult:
    def body():
        bad = [i for i in range(1000)
               if not spectral.is_negative_type(catalog.random_metric(4, (SEED, 4, i)), 1e-9)[0]]
        return not bad, f"{1000 - len(bad)}/1000 four-point metrics of negative type"
    return _timed(4, "four-point metrics are of negative type", 5.0, body)


def criterion_5() -> CriterionResult:
    def body():
        bad = 0
        for i in range(500):
            n, dim = 2 + i % 9, 1 + i % 5
            D = catalog.random_point_cloud_metric(n, dim, (SEED, 5, i))
            bad += not spectral.is_negative_type(D)[0]
        return bad == 0, f"{500 - bad}/500 point-cloud metrics of negative type"
    return _timed(5, "Euclidean metrics are of negative type", 10.0, body)


def criterion_6() -> CriterionResult:
    def body():
        worst, bad = 0.0, []
        for i in range(200):
            n = 2 + i % 6
            DX = negative_type_metric(n, (SEED, 6, i, 0))
            DY = negative_type_metric(n, (SEED, 6, i, 1))
            rep = birkhoff.distortion_distance(DX, DY, seed=(SEED, 6, i))
            err = abs(rep.fw_value - rep.perm_max) / max(1.0, abs(rep.perm_max))
            worst = max(worst, err)
            if err > 1e-7 or rep.certificate is not Certificate.EQUALITY_BY_NEGATIVE_TYPE:
                bad.append(i)
        return not bad, f"{200 - len(bad)}/200 pairs certified, worst relative gap {worst:.3g}"
    return _timed(6, "negative-type equality certificate", 300.0, body)


def criterion_7() -> CriterionResult:
    def body():
        worst, bad = -math.inf, 0
        for i in range(500):
            n = 2 + i % 6
            if i % 2:
                f, g = random_gauge(n, (SEED, 7, i, 0)), random_gauge(n, (SEED, 7, i, 1))
            else:
                f, g = catalog.random_metric(n, (SEED, 7, i, 0)), catalog.random_metric(n, (SEED, 7, i, 1))
            rep = birkhoff.distortion_distance(f, g, seed=(SEED, 7, i))
            excess = rep.delta_estimate - rep.d_quotient
            worst = max(worst, excess)
            bad += excess > 1e-9
        return bad == 0, f"max(delta - d_quotient) = {worst:.3g} over 500 pairs"
    return _timed(7, "1-Lipschitz inequality", 300.0, body)


def criterion_8() -> CriterionResult:
    def body():
        rng = catalog.make_rng(SEED, 8)
        fails = []
        for _ in range(100):
            p, q, r, s = rng.integers(1, 5, size=4)
            A, B = rng.normal(size=(p, q)), rng.normal(size=(p, r))
            C, D = rng.normal(size=(r, s)), rng.normal(size=(q, s))
            lhs, rhs = spectral.trace_kron_identity_check(A, B, C, D)
            if abs(lhs - rhs) > 1e-10 * max(1.0, abs(lhs)):
                fails.append("trace/kron")
            a, b = rng.normal(size=p), rng.normal(size=q)
            if not np.allclose(spectral.vec(np.outer(a, b)), spectral.kron(b, a), rtol=0, atol=1e-15):
                fails.append("vec rank-one")
            m1, m2 = rng.integers(1, 5, size=2)
            S = rng.normal(size=(m1, m1)); S = S + S.T
            T = rng.normal(size=(m2, m2)); T = T + T.T
            ev = np.sort(np.linalg.eigvalsh(spectral.kron(S, T)))
            prod = np.sort(np.outer(np.linalg.eigvalsh(S), np.linalg.eigvalsh(T)).ravel())
            if np.abs(ev - prod).max() > 1e-8:
                fails.append("eigenvalue products")
            A, B = rng.normal(size=(p, q)), rng.normal(size=(r, s))
            C, D = rng.normal(size=(q, p)), rng.normal(size=(s, r))
            left = spectral.kron(A, B) @ spectral.kron(C, D)
            right = spectral.kron(A @ C, B @ D)
            if np.abs(left - right).max() > 1e-10 * max(1.0, np.abs(right).max()):
                fails.append("mixed product")
        return not fails, f"{len(fails)} failures over 4x100 instances" + (f" ({set(fails)})" if fails else "")
    return _timed(8, "Kronecker/vectorization identities", 10.0, body)


def criterion_9() -> CriterionResult:
    def body():
        worst_rec, worst_w = 0.0, 0.0
        for i in range(200):
            n = 2 + i % 8
            P = random_bistochastic(n, (SEED, 9, i))
            terms = birkhoff.bvn_decompose(P)
            R = sum(w * permutation_matrix(s) for w, s in terms)
            worst_rec = max(worst_rec, float(np.abs(R - P).max()))
            worst_w = max(worst_w, abs(math.fsum(w for w, _ in terms) - 1.0))
        ok = worst_rec <= 1e-10 and worst_w <= 1e-10
        return ok, f"max reconstruction error {worst_rec:.3g}, max weight-sum error {worst_w:.3g}"
    return _timed(9, "Birkhoff-von Neumann round trip", 10.0, body)


def criterion_10() -> CriterionResult:
    def body():
        worst_rt, worst_emb, embedded = 0.0, 0.0, 0
        for i in range(500):
            n = 2 + i % 9
            D = (catalog.random_metric(n, (SEED, 101, i)) if i % 2
                 else catalog.random_point_cloud_metric(n, 1 + i % 5, (SEED, 101, i)))
            worst_rt = max(worst_rt, float(np.abs(euclidean.distances_from_gram(euclidean.gram(D)) - D).max()))
            if euclidean.psd_rank(euclidean.gram(D)).is_psd:
                E = euclidean.embed(D)
                embedded += 1
                err = float(np.abs(E.distances() - D).max()) / max(1.0, float(D.max()))
                worst_emb = max(worst_emb, err)
        corpus = sqrt_link_corpus(1000)
        disagree = sum(not euclidean.negative_type_sqrt_consistency(D).agree for D in corpus)
        nonneg = sum(not spectral.is_negative_type(D)[0] for D in corpus)
        ok = worst_rt <= 1e-12 and worst_emb <= 1e-8 and disagree == 0
        return ok, (f"round trip {worst_rt:.3g}, embedding error {worst_emb:.3g} on {embedded} PSD inputs, "
                    f"sqrt-link disagreements {disagree}/1000 ({nonneg} non-negative-type)")
    return _timed(10, "Gram/embedding/sqrt-link round trips", 30.0, body)


def criterion_11() -> CriterionResult:
    def body():
        rng = catalog.make_rng(SEED, 11)
        metric_fail = eucl_fail = 0
        for i in range(200):
            c = float(rng.uniform(1e-3, 1.0))
            D = catalog.random_metric(2 + i % 8, (SEED, 111, i))
            metric_fail += not validate_metric(power_transform(D, c))
            E = catalog.random_point_cloud_metric(2 + i % 9, 1 + i % 5, (SEED, 112, i))
            eucl_fail += not euclidean.power_preserves_euclidean_check(E, c)
        return metric_fail == eucl_fail == 0, (f"metric failures {metric_fail}/200, "
                                               f"Euclidean failures {eucl_fail}/200")
    return _timed(11, "power transforms", 30.0, body)


def criterion_12() -> CriterionResult:
    def body():
        ex = catalog.gauged_counterexample(5)
        control = counterexample_search(5, 20, SearchParams(), seed=SEED, controls=[(ex.f, ex.g)])
        first = counterexample_search(5, 1000, SearchParams(), seed=SEED).to_json()
        second = counterexample_search(5, 1000, SearchParams(), seed=SEED).to_json()
        n_ctrl = len(control.witnesses)
        ok = n_ctrl == 1 and first == second
        return ok, (f"control witnesses {n_ctrl}, 1000-trial report reproducible: {first == second}, "
                    f"{len(first)} bytes")
    return _timed(12, "search pipeline control", 600.0, body)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def run_all(only: set[int] | None = None) -> list[CriterionResult]:
    return [check() for k, check in enumerate(CRITERIA, start=1) if only is None or k in only]
