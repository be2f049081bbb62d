"""Differential check of the solver against the brute-force oracle.

Prints every disagreement (there should be none) and a summary line.
"""

import argparse
import sys
import time

from regnc.generate import GenConfig, Mode, gen_random
from regnc.semantics import Status, evaluate, oracle_sat
from regnc.solver import solve


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0, help="first seed")
    ap.add_argument("--props", type=int, default=8)
    ap.add_argument("--literals", type=int, default=24)
    ap.add_argument("--k", type=int, default=10)
    args = ap.parse_args(argv)

    bad = sat = 0
    t0 = time.perf_counter()
    for seed in range(args.seed, args.seed + args.count):
        cfg = GenConfig(seed=seed, mode=Mode.CONJUNCTIVE_HNC, props=1 + seed % args.props,
                        literals=args.literals, depth=5, arity=4, k=args.k)
        phi = gen_random(cfg)
        res = solve(phi, trace=False)
        expected = oracle_sat(phi).status
        ok = res.status is expected
        if res.status is Status.SAT:
            sat += 1
            ok = ok and evaluate(phi, res.model) == 1
        if not ok:
            bad += 1
            print(f"seed {seed}: solver {res.status.value}, oracle {expected.value}\n  {phi}")
    dt = time.perf_counter() - t0
    print(f"{args.count} instances, {sat} SAT, {bad} disagreements, {dt:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
