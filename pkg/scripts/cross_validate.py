#!/usr/bin/env python3
"""Randomized cross-validation sweep over all decision procedures.

Runs the four agreement suites (pure-state decider vs tail-sum oracle,
closed form vs critical-mu vs LP, rational grid vs critical set, and
counterexample generator closure) and prints a JSON summary.  Exits
nonzero if any suite reports a disagreement.
"""

import argparse
import json
import sys
import time

from loccdecide.harness import run_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=2000,
                    help="trials for the two fast suites; the LP-heavy "
                         "suites run at trials/10")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--tolerance", type=float, default=1e-9)
    args = ap.parse_args()

    t0 = time.perf_counter()
    summaries = run_all(trials=args.trials, seed=args.seed, tol=args.tolerance)
    elapsed = time.perf_counter() - t0

    out = {
        "seed": args.seed,
        "trials": args.trials,
        "elapsed_seconds": round(elapsed, 3),
        "suites": [s.to_dict() for s in summaries],
        "clean": all(s.clean for s in summaries),
    }
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0 if out["clean"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
