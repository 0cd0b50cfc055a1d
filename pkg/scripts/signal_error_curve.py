"""Empirical bit error rate of Bob's threshold decoder against the click
budget per bit, with the Hoeffding bound alongside.

    python scripts/signal_error_curve.py --trials 2000 --seed 1
"""

import argparse

from tribeam.montecarlo import bit_error_rate, hoeffding_bound, transmit


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=2000, help="bits sent per click budget")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budgets", default="1,4,16,64,128,256,512,1024")
    args = ap.parse_args()

    message = "01" * (args.trials // 2)
    print("clicks_per_bit,empirical_ber,hoeffding_bound")
    for i, n in enumerate(int(x) for x in args.budgets.split(",")):
        ber = bit_error_rate(transmit(message, n, args.seed + i))
        print(f"{n},{ber!r},{hoeffding_bound(n)!r}")


if __name__ == "__main__":
    main()
