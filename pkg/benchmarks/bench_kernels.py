"""Time the compiled and interpreted kernels on identical inputs.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Also times one full GA run (N=50, G=120, canonical wells) per backend.
"""
from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from genopt import kernels
from genopt.engine import RunConfig, run
from genopt.genome import GenomeSpec
from genopt.landscapes import WellsLandscape


def cases(rng):
    z100 = rng.random((100, 2))
    keys = rng.random(100)
    protected = np.zeros(100, bool)
    protected[0] = True
    u = rng.random((50, 3))
    objs = rng.random((200, 2))
    cfg = RunConfig(GenomeSpec.uniform(2, 0, 10), WellsLandscape(), G=120)
    return {
        "eliminate_rounds(pool=100, keep=50)": lambda: kernels.eliminate_rounds(keys, protected, 50, u, 0.9),
        "niche_counts(N=100)": lambda: kernels.niche_counts(z100, 0.15, 1.0),
        "front_ranks(n=200, k=2)": lambda: kernels.front_ranks(objs),
        "mean_pairwise_distance(N=100)": lambda: kernels.mean_pairwise_distance(z100),
        "ga_run(N=50, G=120)": lambda: run(cfg),
    }


def measure(repeat: int):
    results = {}
    for name in kernels.available_backends():
        kernels.use_backend(name)
        for label, fn in cases(np.random.default_rng(0)).items():
            number = 1 if label.startswith("ga_run") else 20
            best = min(timeit.repeat(fn, number=number, repeat=repeat)) / number
            results.setdefault(label, {})[name] = best
    return results


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if len(backends) < 2:
        print("compiled extension not built; only the python backend is timed", file=sys.stderr)
    results = measure(args.repeat)
    width = max(map(len, results))
    print(f"{'case':<{width}}  " + "  ".join(f"{b:>12}" for b in backends) + ("  speedup" if len(backends) > 1 else ""))
    for label, row in results.items():
        cells = "  ".join(f"{row[b] * 1e3:>10.3f}ms" for b in backends)
        extra = f"  {row['python'] / row['cython']:>6.1f}x" if len(backends) > 1 else ""
        print(f"{label:<{width}}  {cells}{extra}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
