import json

import numpy as np
import pytest

from nspaces import catalog
from nspaces.search import (
    SearchParams,
    SearchReport,
    counterexample_search,
    filter_non_negative_type,
    verify_witness,
)

FAST = SearchParams(restarts=4)


def test_zero_trials():
    rep = counterexample_search(5, 0, FAST, seed=1)
    assert rep.records == [] and rep.witnesses == []
    assert rep.stats["witness_count"] == 0


def test_four_point_sanity_mode():
    rep = counterexample_search(4, 30, FAST, seed=2)
    assert len(rep.records) == 30 and not rep.witnesses
    assert rep.stats["certificates"] == {"EqualityByNegativeType": 30}


def test_control_gives_one_witness():
    ex = catalog.gauged_counterexample(5)
    rep = counterexample_search(5, 5, FAST, seed=3, controls=[(ex.f, ex.g)])
    assert len(rep.witnesses) == 1
    w = rep.witnesses[0]
    assert w["kind"] == "control" and w["trial"] == -1
    assert verify_witness(w)
    assert rep.records[0]["trial"] == -1


def test_tampered_witness_fails_verification():
    ex = catalog.gauged_counterexample(4)
    w = counterexample_search(4, 0, FAST, seed=0, controls=[(ex.f, ex.g)]).witnesses[0]
    bad = dict(w, gap=w["gap"] + 1e-3)
    assert not verify_witness(bad)
    bad = dict(w, coupling=np.eye(4).tolist())
    assert not verify_witness(bad)


def test_determinism_and_json():
    a = counterexample_search(5, 12, FAST, seed=9)
    b = counterexample_search(5, 12, FAST, seed=9)
    assert a.to_json() == b.to_json()
    back = SearchReport.from_dict(json.loads(a.to_json()))
    assert back.to_json() == a.to_json()
    assert counterexample_search(5, 12, FAST, seed=10).to_json() != a.to_json()


def test_parallel_matches_serial():
    a = counterexample_search(5, 8, FAST, seed=4, workers=1)
    b = counterexample_search(5, 8, FAST, seed=4, workers=2)
    assert a.to_json() == b.to_json()


def test_report_schema():
    data = json.loads(counterexample_search(5, 3, FAST, seed=0).to_json())
    assert {"n", "trials", "witnesses", "stats"} <= set(data)
    assert set(data["stats"]["gap_histogram"]) == {"<=1e-12", "(1e-12,1e-9]", "(1e-9,1e-7]", ">1e-7"}


def test_filter_examples():
    fours = [catalog.random_metric(4, s) for s in range(50)]
    stats = {}
    assert list(filter_non_negative_type(fours, stats)) == []
    assert stats == {4: {"seen": 50, "passed": 0}}
    k32 = catalog.k32_space()[0]
    out = list(filter_non_negative_type([fours[0], k32, catalog.mr_space(5)]))
    assert len(out) == 2 and np.array_equal(out[0], k32)


def test_filtered_search():
    rep = counterexample_search(7, 3, SearchParams(restarts=3, filter_negtype=True), seed=5)
    assert all(r["certificate"] != "EqualityByNegativeType" for r in rep.records)
    entry = rep.stats["filter"]["7"]
    assert entry["passed"] == 6 and 0 < entry["pass_rate"] <= 1


@pytest.mark.parametrize("n", [1, 10])
def test_n_out_of_range(n):
    with pytest.raises(ValueError):
        counterexample_search(n, 1, FAST)
