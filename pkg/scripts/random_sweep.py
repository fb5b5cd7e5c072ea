"""Random-instance sweep: solver verdicts against the brute-force oracle.

    python3 scripts/random_sweep.py --instances 1000 --seed 0 --depth 2

Counts soundness failures (a Unifiable verdict whose unifier does not verify)
and completeness misses (oracle finds a unifier, solver says no).
"""
import argparse
import random
import time
from collections import Counter

from fl0unify.core import verify_unifier
from fl0unify.solver import VerificationFailure, original_goals, solve
from fl0unify.testkit import BudgetExceeded, gen_problem, gen_problem_text, oracle_search, random_params


def sweep(instances: int, seed: int, depth: int, verbose: bool = False) -> Counter:
    rng = random.Random(seed)
    tally = Counter()
    for _ in range(instances):
        params = random_params(rng)
        src = gen_problem(params)
        tally["instances"] += 1
        try:
            res = solve(src)
        except VerificationFailure as exc:
            tally["unsound"] += 1
            print(f"UNSOUND {params}: {exc}\n{gen_problem_text(params)}")
            continue
        if res.unifiable:
            tally["unifiable"] += 1
            if not verify_unifier(original_goals(src), res.user_substitution):
                tally["unsound"] += 1
        try:
            oracle = oracle_search(src, depth)
        except BudgetExceeded:
            tally["oracle_budget"] += 1
            continue
        if oracle.found:
            tally["oracle_found"] += 1
            if not res.unifiable:
                tally["missed"] += 1
                print(f"MISSED {params}\n{gen_problem_text(params)}")
        elif res.unifiable:
            tally["deeper_than_bound"] += 1
        if verbose:
            print(params, res.unifiable, oracle.found, res.stats.counters())
    return tally


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()
    t0 = time.perf_counter()
    tally = sweep(args.instances, args.seed, args.depth, args.verbose)
    for k in sorted(tally):
        print(f"{k}: {tally[k]}")
    print(f"elapsed: {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
