#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure-Python fallback.

The misreport scan is the hot loop of every strategyproofness campaign,
so that is what gets timed: one full scan (grid stage + compass
refinement) per (mechanism, profile, agent) call, plus a batch of plain
evaluations.  Both backends are loaded explicitly, bypassing the
import-time selection.

Run::

    python benchmarks/bench_kernels.py [--scans 200] [--grid 9]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mechlab._kernels import get_backend

CASES = [
    # label, family code, p1, p2, n, m
    ("dictator:0 (n=2, m=2)", 0, 0.0, 0.0, 2, 2),
    ("c1:1,1", 1, 1.0, 1.0, 2, 2),
    ("c2:1", 2, 1.0, 0.0, 2, 2),
    ("c3:-1", 3, -1.0, 0.0, 2, 2),
    ("median (n=5, m=3)", 4, 0.0, 0.0, 5, 3),
    ("midpoint", 5, 0.0, 0.0, 2, 2),
]


def time_scans(backend, code, p1, p2, profiles, grid, refine) -> float:
    start = time.perf_counter()
    for pts in profiles:
        for agent in range(pts.shape[0]):
            backend.misreport_scan(code, p1, p2, pts, agent, 2.0, -10.0, 10.0, grid, refine)
    return time.perf_counter() - start


def time_evals(backend, code, p1, p2, profiles) -> float:
    start = time.perf_counter()
    for pts in profiles:
        backend.eval_mechanism(code, p1, p2, pts)
    return time.perf_counter() - start


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scans", type=int, default=200, help="profiles per scan benchmark")
    parser.add_argument("--evals", type=int, default=20_000, help="profiles per eval benchmark")
    parser.add_argument("--grid", type=int, default=9, help="grid points per axis")
    parser.add_argument("--refine", type=int, default=40, help="refinement halvings")
    args = parser.parse_args()

    fallback = get_backend("fallback")
    try:
        compiled = get_backend("compiled")
    except ImportError:
        print("compiled core not built; nothing to compare (pip install -e . rebuilds it)")
        return 1

    rng = np.random.default_rng(0)
    print(f"misreport_scan: {args.scans} profiles x n agents, grid={args.grid}, "
          f"refine={args.refine}")
    header = f"{'case':26s} {'compiled':>12s} {'fallback':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for label, code, p1, p2, n, m in CASES:
        profiles = [rng.uniform(-10, 10, (n, m)) for _ in range(args.scans)]
        t_c = time_scans(compiled, code, p1, p2, profiles, args.grid, args.refine)
        t_f = time_scans(fallback, code, p1, p2, profiles, args.grid, args.refine)
        # agreement spot check on the last profile
        r_c = compiled.misreport_scan(code, p1, p2, profiles[-1], 0, 2.0, -10, 10, args.grid, args.refine)
        r_f = fallback.misreport_scan(code, p1, p2, profiles[-1], 0, 2.0, -10, 10, args.grid, args.refine)
        assert abs(r_c[1] - r_f[1]) < 1e-9, f"backend disagreement on {label}"
        print(f"{label:26s} {t_c * 1e3:10.1f}ms {t_f * 1e3:10.1f}ms {t_f / t_c:8.1f}x")

    print(f"\neval_mechanism: {args.evals} single evaluations")
    print(header)
    print("-" * len(header))
    for label, code, p1, p2, n, m in CASES:
        profiles = [rng.uniform(-10, 10, (n, m)) for _ in range(args.evals)]
        t_c = time_evals(compiled, code, p1, p2, profiles)
        t_f = time_evals(fallback, code, p1, p2, profiles)
        print(f"{label:26s} {t_c * 1e3:10.1f}ms {t_f * 1e3:10.1f}ms {t_f / t_c:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
