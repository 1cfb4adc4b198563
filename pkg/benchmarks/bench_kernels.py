"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--samples N] [--slots N] [--repeat R]

Both backends are fed identical inputs; the script checks that their
outputs agree before reporting timings.
"""
import argparse
import timeit

import numpy as np

from urllc_hma import kernels

py = kernels.python_backend
cy = kernels.compiled_backend


def inputs(n_samples, n_slots, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.exponential(1.0, size=(3, n_samples)) * 1e3
    splits = np.array([[1 - 2 * b, b, b] for b in np.linspace(0, 0.5, 12)])
    n_users = 20
    sched = dict(n_slots=n_slots, interference_key=rng.uniform(-160, -140, n_users),
                 admissible=rng.random(n_users) < 0.8, rate=rng.uniform(1e4, 1e6, n_users),
                 n_ded_ns=1, n_ded_s=2, n_shared=2, delay_budget=10)
    return x, splits, sched


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--slots", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if cy is None:
        raise SystemExit("compiled backend not built; run `pip install -e . --no-build-isolation`")
    x, splits, sched = inputs(args.samples, args.slots)
    t = 1e3

    for combining in (kernels.SELECTION, kernels.SUM_RATE):
        assert np.array_equal(py.count_failures(x, splits, t, combining),
                              cy.count_failures(x, splits, t, combining))
    b1, b2 = np.full(20, 10), np.full(20, 10)
    r1, r2 = py.schedule_slots(b1, **sched), cy.schedule_slots(b2, **sched)
    assert np.array_equal(r1[0], r2[0]) and np.array_equal(r1[1], r2[1]) and r1[2] == r2[2]

    rows = []
    for name, combining in (("count_failures/selection", kernels.SELECTION),
                            ("count_failures/sum", kernels.SUM_RATE)):
        tp = bench(lambda: py.count_failures(x, splits, t, combining), args.repeat)
        tc = bench(lambda: cy.count_failures(x, splits, t, combining), args.repeat)
        rows.append((f"{name} ({args.samples} x {len(splits)})", tp, tc))
    tp = bench(lambda: py.schedule_slots(np.full(20, 10), **sched), args.repeat)
    tc = bench(lambda: cy.schedule_slots(np.full(20, 10), **sched), args.repeat)
    rows.append((f"schedule_slots ({args.slots} slots, 20 users)", tp, tc))

    print(f"{'kernel':<48}{'python [s]':>12}{'compiled [s]':>14}{'speedup':>10}")
    for name, tp, tc in rows:
        print(f"{name:<48}{tp:>12.4f}{tc:>14.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
