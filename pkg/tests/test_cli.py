import json

import numpy as np
import pytest

from nspaces import catalog
from nspaces.birkhoff import GapReport
from nspaces.cli import main
from nspaces.euclidean import Embedding
from nspaces.matrix_io import matrix_to_csv, matrix_to_json
from nspaces.spectral import ConditionalSpectrum


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_compare_gauged(write, tmp_path, capsys):
    ex = catalog.gauged_counterexample(5)
    a, b = write("f.json", matrix_to_json(ex.f)), write("g.json", matrix_to_json(ex.g))
    out_json = str(tmp_path / "rep.json")
    code, out, _ = run(["compare", a, b, "--gauged", "--json", out_json], capsys)
    assert code == 0
    assert "StrictGapWitness" in out and "1.78885438" in out
    rep = GapReport.from_dict(json.loads((tmp_path / "rep.json").read_text()))
    assert rep.certificate.value == "StrictGapWitness"
    assert rep.d_quotient == pytest.approx(1.7888544, abs=1e-7)
    # refuses to overwrite without --force
    assert run(["compare", a, b, "--gauged", "--json", out_json], capsys)[0] == 2
    assert run(["compare", a, b, "--gauged", "--json", out_json, "--force"], capsys)[0] == 0


def test_compare_requires_metrics_by_default(write, capsys):
    ex = catalog.gauged_counterexample(3)
    a, b = write("f.json", matrix_to_json(ex.f)), write("g.json", matrix_to_json(ex.g))
    code, _, err = run(["compare", a, b], capsys)
    assert code == 2 and "error" in err


def test_compare_metric_csv(write, capsys):
    a = write("a.csv", matrix_to_csv(catalog.random_metric(4, 1)))
    b = write("b.csv", matrix_to_csv(catalog.random_metric(4, 2)))
    code, out, _ = run(["compare", a, b, "--seed", "3"], capsys)
    assert code == 0 and "EqualityByNegativeType" in out
    assert run(["compare", a, b, "--seed", "3"], capsys)[1] == out


def test_compare_size_mismatch(write, capsys):
    a = write("a.csv", matrix_to_csv(catalog.random_metric(4, 1)))
    b = write("b.csv", matrix_to_csv(catalog.random_metric(5, 2)))
    assert run(["compare", a, b], capsys)[0] == 2


def test_negtype_k32(write, tmp_path, capsys):
    k = write("k.json", matrix_to_json(catalog.k32_space()[0]))
    out_json = str(tmp_path / "s.json")
    code, out, _ = run(["negtype", k, "--json", out_json], capsys)
    assert code == 0 and "NOT negative type" in out
    value = float(out.split("witness form value")[1].split()[0])
    assert value > 0
    data = json.loads((tmp_path / "s.json").read_text())
    assert data["negative_type"] is False
    spec = ConditionalSpectrum.from_dict(data)
    D, eta = catalog.k32_space()
    assert spec.witness @ D @ spec.witness == pytest.approx(value, rel=1e-8)
    assert eta @ D @ eta == 2


def test_negtype_nan_file(write, capsys):
    p = write("bad.json", '{"n": 2, "entries": [[0, NaN], [NaN, 0]]}')
    assert run(["negtype", p], capsys)[0] == 2


def test_embed_power(write, tmp_path, capsys):
    p = write("m.json", matrix_to_json(catalog.random_metric(4, 11)))
    out = str(tmp_path / "e.json")
    code, text, _ = run(["embed", p, "--power", "0.5", "--out", out], capsys)
    assert code == 0
    emb = Embedding.from_dict(json.loads((tmp_path / "e.json").read_text()))
    assert emb.dim <= 3 and f"R^{emb.dim}" in text


def test_embed_not_euclidean(write, capsys):
    from nspaces.core import power_transform
    p = write("k.json", matrix_to_json(power_transform(catalog.k32_space()[0], 0.5)))
    code, out, _ = run(["embed", p], capsys)
    assert code == 1 and "not Euclidean" in out


def test_catalog(tmp_path, capsys):
    code, out, _ = run(["catalog", "mr", "--r", "5"], capsys)
    assert code == 0 and json.loads(out)["n"] == 7
    assert run(["catalog", "random", "--n", "5"], capsys)[0] == 2
    a = run(["catalog", "random", "--n", "5", "--seed", "4"], capsys)[1]
    b = run(["catalog", "random", "--n", "5", "--seed", "4"], capsys)[1]
    assert a == b
    code, out, _ = run(["catalog", "gauged", "--n", "3", "--negative"], capsys)
    assert np.array_equal(json.loads(out)["entries"], -(1 - np.eye(3)))
    assert run(["catalog", "cloud", "--n", "4", "--dim", "2", "--seed", "1"], capsys)[0] == 0
    assert run(["catalog", "mr", "--r", "3"], capsys)[0] == 2


def test_search(tmp_path, capsys):
    out = tmp_path / "s.json"
    argv = ["search", "--n", "5", "--trials", "4", "--seed", "2", "--restarts", "3",
            "--control", "--threads", "1", "--out", str(out)]
    code, text, _ = run(argv, capsys)
    assert code == 0 and "witnesses=1" in text
    first = out.read_text()
    assert run(argv + ["--force"], capsys)[0] == 0
    assert out.read_text() == first


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run(["search", "--n", "5"], capsys)[0] == 2
    assert run(["compare", "/nonexistent/a.json", "/nonexistent/b.json"], capsys)[0] == 2
    assert run(["--help"], capsys)[0] == 0


def test_verify_subset(capsys):
    code, out, _ = run(["verify-paper", "--only", "2", "3"], capsys)
    assert code == 0 and out.count("[PASS]") == 2
