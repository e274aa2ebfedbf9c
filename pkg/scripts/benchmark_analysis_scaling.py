#!/usr/bin/env python3
"""Measure how counterstrategy analysis scales with automaton size.

    python3 scripts/benchmark_analysis_scaling.py [sizes ...]

Prints wall-clock per size and the per-doubling ratios; the acceptance
bound is 4.5 per doubling.
"""
from __future__ import annotations

import pathlib
import random
import sys
import time

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from gr1repair.analysis import liveness_analysis, safety_analysis  # noqa: E402
from gr1repair.logic import (  # noqa: E402
    UNCONTROLLABLE,
    OUTPUT,
    Assignment,
    GR1Spec,
    Proposition,
    parse_formula,
)
from gr1repair.synthesis import Counterstrategy, CounterstrategyNode  # noqa: E402


def synthetic(n: int) -> Counterstrategy:
    rng = random.Random(n)
    nodes = []
    for v in range(n):
        trans = {(v + 1) % n}
        if rng.random() < 0.3:
            trans.add(rng.randrange(n))
        if rng.random() < 0.02:
            trans = set()
        nodes.append(
            CounterstrategyNode(
                id=v,
                state=Assignment(["a"] if v % 2 else ["a", "y"]),
                rank=rng.randint(1, 2),
                env_move=Assignment(["a"]),
                transitions=tuple(sorted(trans)),
            )
        )
    return Counterstrategy(
        variables=("a", "y"), input_variables=("a",), output_variables=("y",),
        nodes=nodes, initial=(0,),
    )


def main() -> int:
    sizes = [int(s) for s in sys.argv[1:]] or [1000, 2000, 4000, 8000]
    names = ["a", "y"]
    spec = GR1Spec(
        propositions=(Proposition("a", UNCONTROLLABLE), Proposition("y", OUTPUT)),
        sys_safety=(parse_formula("!(a' & y')", names),),
        sys_liveness=(parse_formula("a", names), parse_formula("!a", names)),
    )
    timings = []
    for n in sizes:
        cs = synthetic(n)
        best = float("inf")
        for _ in range(3):
            t0 = time.perf_counter()
            safety = safety_analysis(cs, spec)
            liveness = liveness_analysis(cs, spec)
            best = min(best, time.perf_counter() - t0)
        timings.append(best)
        print(f"|states| = {n:6d}   {best * 1000:8.1f} ms   "
              f"({len(safety)} safety, {len(liveness)} liveness findings)")
    for (n1, t1), (n2, t2) in zip(zip(sizes, timings), zip(sizes[1:], timings[1:])):
        print(f"ratio {n2}/{n1}: {t2 / max(t1, 1e-9):.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
