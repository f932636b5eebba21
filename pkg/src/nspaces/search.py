"""Randomized search for metric pairs where some coupling beats every permutation."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .assignment import ENUMERATION_CAP, max_perm_correlation
from .birkhoff import (
    CERT_TOL,
    DEFAULT_FW_TOL,
    DEFAULT_MAX_ITERS,
    DEFAULT_RESTARTS,
    Certificate,
    check_bistochastic,
    distortion_distance,
)
from .catalog import random_metric
from .spectral import is_negative_type

MAX_FILTER_DRAWS = 20_000
GAP_BINS = (1e-12, 1e-9, 1e-7)


def filter_non_negative_type(stream: Iterable, stats: dict | None = None) -> Iterator[np.ndarray]:
    """Yield only the matrices that fail the negative-type test.

    ``stats`` (if given) is updated in place as ``{n: {"seen": .., "passed": ..}}``.
    """
    for D in stream:
        D = np.asarray(D, dtype=float)
        if stats is not None:
            entry = stats.setdefault(D.shape[0], {"seen": 0, "passed": 0})
            entry["seen"] += 1
        if not is_negative_type(D)[0]:
            if stats is not None:
                entry["passed"] += 1
            yield D


def _draw_stream(n: int, seed, trial: int, slot: int) -> Iterator[tuple[list[int], np.ndarray]]:
    draw = 0
    while True:
        key = [*_as_list(seed), trial, slot, draw]
        yield key, random_metric(n, key)
        draw += 1


def _as_list(seed) -> list[int]:
    return [int(s) for s in seed] if isinstance(seed, (list, tuple)) else [int(seed)]


def _hq(DX: np.ndarray, DY: np.ndarray, P: np.ndarray) -> float:
    n = DX.shape[0]
    terms = DX[:, :, None, None] * DY[None, None, :, :] * P[:, None, :, None] * P[None, :, None, :]
    return math.fsum(terms.ravel()) if n else 0.0


def verify_witness(witness: dict, cert_tol: float = CERT_TOL) -> bool:
    """Recompute both sides of a stored witness from scratch.

    The permutation maximum is re-enumerated and h at the stored coupling is
    re-evaluated as the quadruple sum, both with ``math.fsum``.
    """
    fX = np.asarray(witness["fX"], dtype=float)
    fY = np.asarray(witness["fY"], dtype=float)
    P = check_bistochastic(np.asarray(witness["coupling"], dtype=float), 1e-10)
    if np.any(P < 0):
        return False
    perm_max, _ = max_perm_correlation(fX, fY)
    gap = _hq(fX, fY, P) - perm_max
    return gap > cert_tol and abs(gap - witness["gap"]) <= 1e-9 * max(1.0, abs(perm_max))


@dataclass
class SearchParams:
    restarts: int = DEFAULT_RESTARTS
    max_iters: int = DEFAULT_MAX_ITERS
    tol: float = DEFAULT_FW_TOL
    cert_tol: float = CERT_TOL
    filter_negtype: bool = False


@dataclass
class SearchReport:
    n: int
    trials: int
    seed: int | list[int]
    params: SearchParams
    records: list[dict] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "params": vars(self.params),
            "records": self.records,
            "witnesses": self.witnesses,
            "stats": self.stats,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_dict(cls, data: dict) -> "SearchReport":
        return cls(data["n"], data["trials"], data["seed"], SearchParams(**data["params"]),
                   data["records"], data["witnesses"], data["stats"])


def _run_pair(fX, fY, trial, seed, params: SearchParams, kind: str, keys) -> tuple[dict, dict | None]:
    stream = [1, -trial] if trial < 0 else [0, trial]
    rep = distortion_distance(fX, fY, params.restarts, params.max_iters, params.tol,
                              seed=[*_as_list(seed), *stream], cert_tol=params.cert_tol)
    record = {
        "trial": trial,
        "kind": kind,
        "certificate": rep.certificate.value,
        "gap": rep.gap,
        "perm_max": rep.perm_max,
        "fw_value": rep.fw_value,
        "d_quotient": rep.d_quotient,
        "delta_estimate": rep.delta_estimate,
    }
    witness = None
    if rep.certificate is Certificate.STRICT_GAP_WITNESS:
        witness = {
            "trial": trial,
            "kind": kind,
            "seeds": keys,
            "fX": np.asarray(fX).tolist(),
            "fY": np.asarray(fY).tolist(),
            "gap": rep.gap,
            "coupling": rep.fw_coupling.tolist(),
            "perm": [i + 1 for i in rep.perm],
        }
        if not verify_witness(witness, params.cert_tol):
            record["certificate"] = Certificate.INCONCLUSIVE.value
            record["note"] = "gap did not survive recomputation"
            witness = None
    return record, witness


def _trial(args) -> tuple[dict, dict | None, dict]:
    n, trial, seed, params = args
    filt_stats: dict = {}
    pair, keys = [], []
    for slot in range(2):
        stream = _draw_stream(n, seed, trial, slot)
        if params.filter_negtype:
            key_box: list = []

            def tagged(s=stream):
                for k, D in s:
                    key_box.append(k)
                    yield D

            limited = (D for _, D in zip(range(MAX_FILTER_DRAWS), tagged()))
            D = next(filter_non_negative_type(limited, filt_stats), None)
            if D is None:
                return {"trial": trial, "kind": "metric", "certificate": None,
                        "note": f"no non-negative-type draw in {MAX_FILTER_DRAWS}"}, None, filt_stats
            keys.append(key_box[-1])
        else:
            k, D = next(stream)
            keys.append(k)
        pair.append(D)
    record, witness = _run_pair(pair[0], pair[1], trial, seed, params, "metric", keys)
    return record, witness, filt_stats


def _gap_histogram(gaps: list[float]) -> dict:
    labels = ["<=1e-12", "(1e-12,1e-9]", "(1e-9,1e-7]", ">1e-7"]
    counts = dict.fromkeys(labels, 0)
    for gap in gaps:
        idx = sum(gap > b for b in GAP_BINS)
        counts[labels[idx]] += 1
    return counts


def counterexample_search(
    n: int,
    trials: int,
    params: SearchParams | None = None,
    seed: int | Sequence[int] = 0,
    controls: Sequence[tuple[np.ndarray, np.ndarray]] = (),
    workers: int = 1,
) -> SearchReport:
    """Run ``trials`` random metric pairs (plus optional control pairs) through the gap test.

    Trial ``t`` draws its matrices from the streams ``(seed, t, slot, draw)``
    and seeds Frank-Wolfe with ``(seed, 0, t)``, so reports do not depend on
    scheduling. Control pair ``c`` (1-based) is recorded as trial ``-c`` and
    seeded with ``(seed, 1, c)``. n <= 4 is accepted
    as a sanity mode: every pair there is certified equal.
    """
    params = params or SearchParams()
    if not 2 <= n <= ENUMERATION_CAP:
        raise ValueError(f"n must lie in [2, {ENUMERATION_CAP}]")
    report = SearchReport(n, trials, seed if isinstance(seed, int) else _as_list(seed), params)
    results = []
    for c, (f, g) in enumerate(controls, start=1):
        results.append(_run_pair(np.asarray(f, float), np.asarray(g, float), -c, seed, params,
                                 "control", None) + ({},))
    jobs = [(n, t, seed, params) for t in range(trials)]
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results.extend(pool.map(_trial, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        results.extend(map(_trial, jobs))
    results.sort(key=lambda r: r[0]["trial"])

    filter_stats: dict = {}
    for record, witness, fstats in results:
        report.records.append(record)
        if witness is not None:
            report.witnesses.append(witness)
        for key, entry in fstats.items():
            agg = filter_stats.setdefault(str(key), {"seen": 0, "passed": 0})
            agg["seen"] += entry["seen"]
            agg["passed"] += entry["passed"]
    certs: dict = {}
    for r in report.records:
        certs[str(r["certificate"])] = certs.get(str(r["certificate"]), 0) + 1
    gaps = [r["gap"] for r in report.records if r.get("gap") is not None]
    report.stats = {
        "certificates": certs,
        "gap_histogram": _gap_histogram(gaps),
        "max_gap": max(gaps) if gaps else None,
        "witness_count": len(report.witnesses),
    }
    if params.filter_negtype:
        for entry in filter_stats.values():
            entry["pass_rate"] = entry["passed"] / entry["seen"] if entry["seen"] else 0.0
        report.stats["filter"] = filter_stats
    return report
