#!/usr/bin/env python3
"""Scan the flat-capped monotone margin of a two-qubit ensemble pair.

For each mu on a uniform grid, prints the source/target monotone values and
their margin, marking the critical mu values (0, y2, y1, 1).  Useful for
eyeballing where a transformation fails and how narrow the violation
window is.

Usage: mu_margin_scan.py SOURCE.json TARGET.json [--points 51]
"""

import argparse

import numpy as np

from loccdecide.locc import TwoQubitDistInstance, critical_mu_set
from loccdecide.monotones import f_mu
from loccdecide.states import load_ensemble


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("source")
    ap.add_argument("target")
    ap.add_argument("--points", type=int, default=51)
    args = ap.parse_args()

    inst = TwoQubitDistInstance.from_ensembles(
        load_ensemble(args.source), load_ensemble(args.target)
    )
    critical = critical_mu_set(inst)
    mus = sorted({round(float(m), 12)
                  for m in list(np.linspace(0.0, 1.0, args.points)) + critical})

    print(f"instance: {inst.to_dict()}")
    print(f"{'mu':>10}  {'source':>10}  {'target':>10}  {'margin':>11}")
    for mu in mus:
        lhs = inst.p1 * f_mu(inst.x1, mu) + inst.p2 * f_mu(inst.x2, mu)
        rhs = inst.q1 * f_mu(inst.y1, mu) + inst.q2 * f_mu(inst.y2, mu)
        mark = "  *critical" if any(abs(mu - c) < 1e-12 for c in critical) else ""
        flag = "  VIOLATED" if lhs < rhs - 1e-9 else ""
        print(f"{mu:10.6f}  {lhs:10.6f}  {rhs:10.6f}  {lhs - rhs:11.3e}{mark}{flag}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
