"""Time the numba and numpy screening kernels on the same batches.

    python3 benchmarks/bench_screening.py [--samples 10000] [--points 4] [--repeat 3]

Builds one screening plan per 4-point poset, draws random integer measures,
and times both backends on identical input (numba compile time is reported
separately).  Verdicts are compared for equality.
"""
import argparse
import time

import numpy as np

from screenoff import _kernels
from screenoff.accel import build_plan
from screenoff.search import enumerate_posets, model_from_weights, random_weights
from screenoff.stochastic import VARIANTS


def batches(points: int, samples: int, seed: int):
    rng = np.random.default_rng(seed)
    sites = list(enumerate_posets(points))
    per_site: dict = {}
    for _ in range(samples):
        i = int(rng.integers(len(sites)))
        per_site.setdefault(i, []).append(random_weights(rng, sites[i], 2)[1])
    out = []
    for i, ws in sorted(per_site.items()):
        template = model_from_weights(sites[i], 2, np.ones(2 ** points, dtype=np.int64))
        plan = build_plan(template, tuple(VARIANTS))
        out.append((np.array(ws, dtype=np.int64), plan.cells, plan.shapes))
    return out


def run(which: str, work) -> tuple[float, list]:
    start = time.perf_counter()
    verdicts = [_kernels.screening_ok(w, c, s, which) for w, c, s in work]
    return time.perf_counter() - start, verdicts


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--points", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    t0 = time.perf_counter()
    work = batches(args.points, args.samples, args.seed)
    checks = sum(len(c) for _, c, _ in work)
    print(f"{args.samples} models on {len(work)} posets, {checks} distinct checks "
          f"(setup {time.perf_counter() - t0:.2f}s)")

    if _kernels.HAVE_NUMBA:
        w, c, s = work[0]
        t0 = time.perf_counter()
        _kernels.screening_ok(w[:1], c, s, "numba")
        print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.2f}s")

    results = {}
    for which in ("numba", "numpy") if _kernels.HAVE_NUMBA else ("numpy",):
        times = []
        for _ in range(args.repeat):
            elapsed, verdicts = run(which, work)
            times.append(elapsed)
        results[which] = verdicts
        print(f"{which:>6}: best {min(times):.3f}s of {args.repeat}  "
              f"({args.samples / min(times):,.0f} models/s)")
    if len(results) == 2:
        same = all(np.array_equal(a, b) for a, b in zip(results["numba"], results["numpy"]))
        print(f"verdicts identical: {same}")


if __name__ == "__main__":
    main()
