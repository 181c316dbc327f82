"""Benchmark the compiled kernels against the numpy fallback.

Run as ``python -m ringchain.benchmark``.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from .kernels import backends


def _time(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="kernel backend benchmark")
    ap.add_argument("--points", type=int, default=2_000_000)
    ap.add_argument("--resolution", type=int, default=2000)
    args = ap.parse_args(argv)

    impls = backends()
    ks = np.linspace(0.01, 200.0, args.points)
    kaps = np.linspace(0.01, 4.0, args.points)
    cases = [
        ("loose_pos_abc", (ks, 1.0, 1.3, 2.1, 0.3)),
        ("tight_pos_abc", (ks, 1.0, 2.1, 0.3)),
        ("merged_pos_abc", (ks, 1.0, 1.3, 0.3)),
        ("loose_neg_abc", (kaps, 1.0, 1.3, 2.1, 0.3)),
        ("tight_neg_abc", (kaps, 1.0, 2.1, 0.3)),
        ("merged_neg_abc", (kaps, 1.0, 1.3, 0.3)),
        ("torus_fraction_tight", (0.25, args.resolution)),
        ("torus_fraction_merged", (0.8, args.resolution)),
    ]
    names = sorted(impls)
    header = f"{'kernel':<24}" + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for fname, fargs in cases:
        times = {n: _time(getattr(impls[n], fname), *fargs) for n in names}
        line = f"{fname:<24}" + "".join(f"{times[n] * 1e3:>10.1f}ms" for n in names)
        if len(names) == 2:
            line += f"{times['python'] / times['compiled']:>9.1f}x"
        print(line)
    if "compiled" not in impls:
        print("\ncompiled backend not built; showing numpy fallback only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
