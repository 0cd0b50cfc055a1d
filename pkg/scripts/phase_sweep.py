"""Bob's rate versus the DA2 phase shifter setting, written as CSV.

    python scripts/phase_sweep.py --points 64 --n 100000 > sweep.csv
"""

import argparse
import sys

import numpy as np

from tribeam.montecarlo import phase_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=64)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    phis = 2 * np.pi * np.arange(args.points) / args.points
    rows = phase_sweep(phis, args.n, args.seed)
    out = sys.stdout
    out.write("phi,analytic_bob_rate,empirical_bob_rate,z\n")
    for r in rows:
        z = (r.empirical_bob_rate - r.analytic_bob_rate) / r.stderr if r.stderr else 0.0
        out.write(f"{r.phi!r},{r.analytic_bob_rate!r},{r.empirical_bob_rate!r},{z:.3f}\n")


if __name__ == "__main__":
    main()
