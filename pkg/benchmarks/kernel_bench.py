#!/usr/bin/env python3
"""Benchmark the compiled search kernel against the pure Python one.

Runs the exact decision and the minimum-bin-1 computation over a fixed set
of instances with both kernels and reports wall times and speedups. The two
kernels traverse identical node sequences, so the node counts double as a
lockstep check.

Usage: python benchmarks/kernel_bench.py
"""

import time

from hmbp import oracle
from hmbp.core import WeightProfile, make_instance
from hmbp.witness import extremal_witness


def cases():
    yield "six-bin feasible", make_instance(
        6, (5, 5, 3, 1, 1, 0), (17, 17, 17, 17, 17, 8)
    ), 0
    yield "six-bin extremal (exhaust)", make_instance(
        6, (5, 5, 3, 1, 1, 0), (29, 29, 21, 7, 7, 0)
    ), 0
    for d in (8, 10, 12):
        wit = extremal_witness(WeightProfile((6, 5, 4, 2, 1, 0)), d)
        yield f"distinct extremal d={d} (exhaust)", wit.instance, 0
    tight = tuple(9 * v + 3 for v in (7, 6, 5, 4, 3, 2, 1))
    yield "seven distinct near-tight", make_instance(
        9, (7, 6, 5, 4, 3, 2, 1), tight
    ), 0


def wmin_cases():
    yield "six-bin extremal W^min", make_instance(
        6, (5, 5, 3, 1, 1, 0), (29, 29, 21, 7, 7, 0)
    )
    yield "seven distinct W^min", make_instance(
        9, (7, 6, 5, 4, 3, 2, 1), tuple(9 * v + 3 for v in (7, 6, 5, 4, 3, 2, 1))
    )


def timed(fn, repeat=5):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    if oracle.kernel_name() != "compiled":
        print("compiled kernel not available; nothing to compare")
        return 1
    print(f"{'case':38s} {'pure':>10s} {'compiled':>10s} {'speedup':>8s}  nodes")
    for name, inst, k in cases():
        t_pure, r_pure = timed(lambda: oracle.decide(inst, k, kernel="pure"))
        t_fast, r_fast = timed(lambda: oracle.decide(inst, k, kernel="compiled"))
        assert r_pure.feasible == r_fast.feasible
        assert r_pure.nodes_explored == r_fast.nodes_explored
        print(
            f"{name:38s} {t_pure * 1000:9.2f}ms {t_fast * 1000:9.2f}ms "
            f"{t_pure / t_fast:7.1f}x  {r_fast.nodes_explored}"
        )
    for name, inst in wmin_cases():
        t_pure, v_pure = timed(lambda: oracle.min_bin1_weight(inst, kernel="pure"), 2)
        t_fast, v_fast = timed(
            lambda: oracle.min_bin1_weight(inst, kernel="compiled"), 2
        )
        assert v_pure == v_fast
        print(
            f"{name:38s} {t_pure * 1000:9.2f}ms {t_fast * 1000:9.2f}ms "
            f"{t_pure / t_fast:7.1f}x  W^min={v_fast}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
