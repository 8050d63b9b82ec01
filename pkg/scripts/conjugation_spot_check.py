"""Compare mu and b for psi against conjugates A psi A^-1 and left translates A psi.

    python scripts/conjugation_spot_check.py --seed 1 --count 3 --horizon 4
"""

import argparse
import time

from cremona.dynamics import mu_estimate
from cremona.planemap import act
from cremona.registry import psi, random_automorphisms


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--count", type=int, default=3)
    ap.add_argument("--horizon", type=int, default=4)
    args = ap.parse_args()

    f = psi()
    base = mu_estimate(f, args.horizon)
    print(f"psi: mu >= {base.lower_bound}, b = {base.b_sequence}")
    for A in random_automorphisms(args.seed, args.count):
        for side in ("conjugate", "left"):
            t0 = time.time()
            mu = mu_estimate(act(A, f, side), args.horizon)
            print(f"{side:<9} {A}: mu >= {mu.lower_bound}, b = {mu.b_sequence} "
                  f"({time.time() - t0:.1f}s)")


if __name__ == "__main__":
    main()
