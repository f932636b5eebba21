"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import birkhoff, catalog, euclidean, spectral
from .core import InvalidMatrixError, distance_matrix, gauge_matrix, power_transform
from .matrix_io import matrix_to_json, read_matrix
from .search import SearchParams, counterexample_search

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _default_threads() -> int:
    env = os.environ.get("NSPACES_THREADS")
    return int(env) if env else (os.cpu_count() or 1)


def _write(path: str | None, text: str, force: bool) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    p = Path(path)
    if p.exists() and not force:
        raise UsageError(f"{p} exists; pass --force to overwrite")
    p.write_text(text if text.endswith("\n") else text + "\n")


def _load(path: str, metric: bool) -> np.ndarray:
    try:
        raw = read_matrix(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return distance_matrix(raw) if metric else gauge_matrix(raw)


def compare_matrices(f, g, gauged: bool = False, restarts: int = birkhoff.DEFAULT_RESTARTS,
                     seed: int = 0) -> birkhoff.GapReport:
    """The ``compare`` subcommand minus file handling."""
    f = gauge_matrix(f) if gauged else distance_matrix(f)
    g = gauge_matrix(g) if gauged else distance_matrix(g)
    if f.shape != g.shape:
        raise UsageError(f"point counts differ: {f.shape[0]} vs {g.shape[0]}")
    return birkhoff.distortion_distance(f, g, restarts=restarts, seed=seed)


def cmd_compare(args) -> int:
    f = _load(args.file_a, not args.gauged)
    g = _load(args.file_b, not args.gauged)
    rep = compare_matrices(f, g, args.gauged, args.restarts, args.seed)
    print(f"certificate     {rep.certificate.value}")
    print(f"d_quotient      {_fmt(rep.d_quotient)}")
    print(f"delta_estimate  {_fmt(rep.delta_estimate)}")
    print(f"perm_max        {_fmt(rep.perm_max)}")
    print(f"fw_value        {_fmt(rep.fw_value)}")
    print(f"gap             {_fmt(rep.gap)}")
    print(f"permutation     {' '.join(str(i + 1) for i in rep.perm)}")
    if args.json:
        _write(args.json, json.dumps(rep.to_dict(), indent=1), args.force)
    return EXIT_OK


def cmd_negtype(args) -> int:
    D = _load(args.file, metric=True)
    ok, spec = spectral.is_negative_type(D, args.tol)
    print("negative type" if ok else "NOT negative type")
    print("conditional spectrum  " + " ".join(_fmt(x) for x in spec.eigenvalues))
    if spec.witness is not None:
        w = spec.witness
        print("witness               " + " ".join(_fmt(x) for x in w))
        print(f"witness form value    {_fmt(float(w @ D @ w))}")
    if args.json:
        _write(args.json, json.dumps({"negative_type": ok, **spec.to_dict()}, indent=1), args.force)
    return EXIT_OK


def cmd_embed(args) -> int:
    D = _load(args.file, metric=True)
    if args.power is not None:
        D = power_transform(D, args.power)
    try:
        emb = euclidean.embed(D, args.tol)
    except euclidean.EmbeddingError as exc:
        print(f"not Euclidean: Gram matrix has eigenvalue {_fmt(exc.eigenvalue)}")
        return EXIT_FAIL
    print(f"embedded in R^{emb.dim}")
    for row in emb.points:
        print("  " + " ".join(_fmt(x) for x in row))
    if args.out:
        _write(args.out, json.dumps(emb.to_dict()), args.force)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.kind == "k32":
        D = catalog.k32_space()[0]
    elif args.kind == "mr":
        D = catalog.mr_space(args.r)
    elif args.kind == "gauged":
        ex = catalog.gauged_counterexample(args.n)
        D = ex.g if args.negative else ex.f
    elif args.kind == "random":
        D = catalog.random_metric(args.n, args.seed)
    else:
        D = catalog.random_point_cloud_metric(args.n, args.dim, args.seed)
    _write(args.out, matrix_to_json(D), args.force)
    return EXIT_OK


def cmd_search(args) -> int:
    params = SearchParams(restarts=args.restarts, filter_negtype=args.filter_negtype)
    controls = []
    if args.control:
        ex = catalog.gauged_counterexample(args.n)
        controls.append((ex.f, ex.g))
    report = counterexample_search(args.n, args.trials, params, seed=args.seed,
                                   controls=controls, workers=args.threads)
    print(f"n={report.n} trials={report.trials} witnesses={len(report.witnesses)}")
    for cert, count in sorted(report.stats["certificates"].items()):
        print(f"  {cert:<24} {count}")
    if args.out:
        _write(args.out, report.to_json(), args.force)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verification import run_all

    only = set(args.only) if args.only else None
    results = run_all(only)
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failing: {failed}" if failed else ""))
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nspaces", description="Permutation vs coupling distances on n-point spaces")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compare", help="compare quotient distance and L2-distortion estimate")
    c.add_argument("file_a")
    c.add_argument("file_b")
    c.add_argument("--gauged", action="store_true", help="skip metric validation")
    c.add_argument("--restarts", type=int, default=birkhoff.DEFAULT_RESTARTS)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", metavar="OUT")
    c.add_argument("--force", action="store_true")
    c.set_defaults(func=cmd_compare)

    n = sub.add_parser("negtype", help="negative-type test with conditional spectrum")
    n.add_argument("file")
    n.add_argument("--tol", type=float, default=spectral.DEFINITENESS_RTOL)
    n.add_argument("--json", metavar="OUT")
    n.add_argument("--force", action="store_true")
    n.set_defaults(func=cmd_negtype)

    e = sub.add_parser("embed", help="Euclidean embedding from the Gram matrix")
    e.add_argument("file")
    e.add_argument("--power", type=float)
    e.add_argument("--tol", type=float, default=spectral.DEFINITENESS_RTOL)
    e.add_argument("--out")
    e.add_argument("--force", action="store_true")
    e.set_defaults(func=cmd_embed)

    k = sub.add_parser("catalog", help="emit a named or random matrix as JSON")
    k.add_argument("kind", choices=["k32", "mr", "gauged", "random", "cloud"])
    k.add_argument("--r", type=int, default=5)
    k.add_argument("--n", type=int, default=5)
    k.add_argument("--dim", type=int, default=2)
    k.add_argument("--seed", type=int)
    k.add_argument("--negative", action="store_true", help="gauged: emit g = -f instead of f")
    k.add_argument("--out")
    k.add_argument("--force", action="store_true")
    k.set_defaults(func=cmd_catalog)

    s = sub.add_parser("search", help="random search for metric counterexamples")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--restarts", type=int, default=birkhoff.DEFAULT_RESTARTS)
    s.add_argument("--filter-negtype", action="store_true")
    s.add_argument("--control", action="store_true", help="inject the gauged counterexample as a control")
    s.add_argument("--threads", type=int, default=_default_threads())
    s.add_argument("--out")
    s.add_argument("--force", action="store_true")
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify-paper", help="run the acceptance suite")
    v.add_argument("--only", type=int, nargs="+", metavar="K")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "catalog" and args.kind in ("random", "cloud") and args.seed is None:
        print("error: --seed is required for random catalog entries", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, InvalidMatrixError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
