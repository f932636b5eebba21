"""Benchmark run of the metric counterexample search.

Defaults to 10,000 trial pairs at n=5 with 16 Frank-Wolfe restarts each and
writes the JSON report plus a short timing summary.

    python3 scripts/run_search.py --trials 10000 --n 5 --seed 0 --out results/search_n5.json
"""

import argparse
import os
import time
from pathlib import Path

from nspaces import catalog
from nspaces.search import SearchParams, counterexample_search


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--restarts", type=int, default=16)
    ap.add_argument("--filter-negtype", action="store_true")
    ap.add_argument("--control", action="store_true")
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out", default="results/search.json")
    args = ap.parse_args()

    controls = []
    if args.control:
        ex = catalog.gauged_counterexample(args.n)
        controls.append((ex.f, ex.g))
    params = SearchParams(restarts=args.restarts, filter_negtype=args.filter_negtype)
    t0 = time.perf_counter()
    report = counterexample_search(args.n, args.trials, params, seed=args.seed,
                                   controls=controls, workers=args.workers)
    elapsed = time.perf_counter() - t0

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.to_json())
    stats = report.stats
    print(f"n={args.n} trials={args.trials} restarts={args.restarts} workers={args.workers}")
    print(f"elapsed {elapsed:.1f}s ({elapsed / max(args.trials, 1) * 1e3:.2f} ms/trial)")
    print(f"certificates  {stats['certificates']}")
    print(f"gap histogram {stats['gap_histogram']}")
    print(f"max gap       {stats['max_gap']}")
    print(f"witnesses     {stats['witness_count']}")
    if "filter" in stats:
        print(f"filter        {stats['filter']}")
    print(f"report written to {out}")


if __name__ == "__main__":
    main()
