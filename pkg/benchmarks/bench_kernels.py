"""Time the compiled and pure-numpy kernel backends on synthetic data.

Both backends are run on identical inputs; the script also checks that
their outputs agree bit for bit and writes a JSON summary.

    python3 benchmarks/bench_kernels.py --sizes 50 200 800 --repeat 5
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time

import numpy as np

from ddeba import kernels


def synthetic(rng: np.random.Generator, n: int, p: int, missing: float):
    """Encoded mixed table: alternating numeric and nominal columns."""
    kinds = np.array([i % 2 for i in range(p)], dtype=np.intc)  # 0 nominal, 1 numeric
    X = np.where(kinds == 1, rng.random((n, p)) * 100.0, rng.integers(0, 5, (n, p)).astype(float))
    X[rng.random((n, p)) < missing] = np.nan
    X[:, 0] = rng.integers(0, 5, n)  # one always-present column keeps every pair defined
    scales = np.where(kinds == 1, 100.0, 1.0)
    return np.ascontiguousarray(X), kinds, scales


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_size(backends: dict, n: int, p: int, missing: float, repeat: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    X, kinds, scales = synthetic(rng, n, p, missing)
    q = X[rng.integers(0, n)].copy()
    rows = np.sort(rng.random((n, n - 1)), axis=1)
    sample = np.sort(rng.random(n))

    jobs = {
        "pairwise": lambda k: k.gower_pairwise(X, kinds, scales),
        "query": lambda k: k.gower_to_query(q, X, kinds, scales),
        "ks_rows": lambda k: k.ks_rows(rows, sample),
    }
    out = {"n": n, "features": p, "kernels": {}}
    for job, call in jobs.items():
        results = {name: call(mod) for name, mod in backends.items()}
        timings = {name: best_of(lambda m=mod: call(m), repeat) for name, mod in backends.items()}
        arrays = [r[0] if isinstance(r, tuple) else r for r in results.values()]
        identical = all(np.array_equal(arrays[0], a) for a in arrays[1:])
        entry = {f"{name}_s": t for name, t in timings.items()}
        entry["identical"] = identical
        if "python" in timings and "cython" in timings:
            entry["speedup"] = timings["python"] / timings["cython"]
        out["kernels"][job] = entry
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 200, 800])
    ap.add_argument("--features", type=int, default=12)
    ap.add_argument("--missing", type=float, default=0.1)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", help="write the JSON report here as well as stdout")
    args = ap.parse_args(argv)

    backends = kernels.backends()
    report = {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "backends": sorted(backends),
        "active": kernels.BACKEND,
        "results": [bench_size(backends, n, args.features, args.missing, args.repeat, args.seed)
                    for n in args.sizes],
    }
    text = json.dumps(report, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    ok = all(e["identical"] for r in report["results"] for e in r["kernels"].values())
    if not ok:
        print("backends disagree", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
