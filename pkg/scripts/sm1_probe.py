#!/usr/bin/env python3
"""Positive-stability probe: does a P-matrix times a positive diagonal
always have eigenvalues in the open right half-plane?

Runs seeded (P-matrix, positive diagonal) trials, logs every
counterexample (eigenvalue with nonpositive real part), and confirms each
one independently through the Routh-Hurwitz criterion.  The log is the
deliverable; no verdict is asserted on the claim itself.

Usage:
    python scripts/sm1_probe.py [--trials 1000] [--seed 1] [--out sm1_counterexamples.json]
"""

import argparse

from pmkit import serialize
from pmkit.cayley import sm1_probe


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="sm1_counterexamples.json")
    args = ap.parse_args()

    rpt = sm1_probe(trials=args.trials, seed=args.seed)
    serialize.write_json(
        args.out,
        {
            "trials": rpt.trials,
            "tested": rpt.tested,
            "all_confirmed": rpt.all_confirmed,
            "counterexamples": [
                {
                    "matrix": [list(row) for row in ce.matrix],
                    "diagonal": list(ce.diagonal),
                    "min_real_part": ce.min_real_part,
                    "hurwitz_confirms": ce.hurwitz_confirms,
                }
                for ce in rpt.counterexamples
            ],
        },
    )
    print(
        f"{rpt.tested} pairs tested, {len(rpt.counterexamples)} counterexamples "
        f"(all Hurwitz-confirmed: {rpt.all_confirmed}); log written to {args.out}"
    )
    return 0 if rpt.all_confirmed else 1


if __name__ == "__main__":
    raise SystemExit(main())
