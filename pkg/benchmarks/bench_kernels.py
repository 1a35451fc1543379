"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]

Each workload runs on both backends with identical inputs; results are
checked for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from argmc import _pykernels

try:
    from argmc import _ckernels
except ImportError:
    _ckernels = None

from argmc.attacks import Relation, build_framework
from argmc.kb import SweepConfig


def random_af(rng: random.Random, n: int, p: float):
    attackers, attackees = [0] * n, [0] * n
    for a in range(n):
        for b in range(n):
            if a != b and rng.random() < p:
                attackees[a] |= 1 << b
                attackers[b] |= 1 << a
    return n, attackers, attackees


def workloads():
    rng = random.Random(7)
    small = [random_af(rng, rng.randint(8, 16), 0.2) for _ in range(150)]
    wide = [random_af(rng, 120, 0.02) for _ in range(20)]
    fws = []
    for seed, kb in SweepConfig(count=40).kbs():
        for rel in (Relation.DU, Relation.DR, Relation.RDU):
            af = build_framework(kb, rel).af
            fws.append((af.n, af.attackers, af.attackees))
    budget = 200_000
    return {
        "complete, random 8-16 nodes": lambda k: [k.complete_search(*g, 0, budget) for g in small],
        "preferred, random 8-16 nodes": lambda k: [k.complete_search(*g, 2, budget) for g in small],
        "stable (first 10), 120 nodes": lambda k: [k.complete_search(*g, 1, budget, 0, 0, 10) for g in wide],
        "grounded, sweep frameworks": lambda k: [k.grounded(*g) for g in fws],
        "stable (first 8), sweep frameworks": lambda k: [k.complete_search(*g, 1, budget, 0, 0, 8) for g in fws],
        "max conflict-free (first 50), sweep": lambda k: [k.maximal_conflict_free(*g, budget, -1, 0, 50)
                                                           for g in fws],
    }


def timed(fn, kernels, repeat: int):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(kernels)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    ns = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    rows = []
    for name, fn in workloads().items():
        tp, rp = timed(fn, _pykernels, ns.repeat)
        tc, rc = timed(fn, _ckernels, ns.repeat)
        if rp != rc:
            print(f"backends disagree on {name!r}", file=sys.stderr)
            return 1
        rows.append({"workload": name, "python_s": round(tp, 4), "cython_s": round(tc, 4),
                     "speedup": round(tp / tc, 1) if tc else None})
    if ns.json:
        print(json.dumps(rows, indent=2))
    else:
        width = max(len(r["workload"]) for r in rows)
        print(f"{'workload':<{width}}  {'python':>9}  {'cython':>9}  speedup")
        for r in rows:
            print(f"{r['workload']:<{width}}  {r['python_s']:>8.3f}s  {r['cython_s']:>8.3f}s  {r['speedup']:>6}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
