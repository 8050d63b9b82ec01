"""mu lower bounds for the shear family chi_{n,p} = (x + y^n, y) o (x, y + x^p).

    python scripts/family_mu.py --horizon 4 --max-n 3 --max-p 3
"""

import argparse
import csv
import sys
import time

from cremona.dynamics import mu_estimate, regularizability_verdict
from cremona.registry import chi_np


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizon", type=int, default=4)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--max-p", type=int, default=3)
    args = ap.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(["n", "p", "degree", "b", "mu_lower", "mu_upper", "verdict", "seconds"])
    for n in range(2, args.max_n + 1):
        for p in range(2, args.max_p + 1):
            t0 = time.time()
            f = chi_np(n, p)
            mu = mu_estimate(f, args.horizon)
            v = regularizability_verdict(f, args.horizon, mu=mu)
            w.writerow([n, p, f.degree, mu.b_sequence[0], mu.lower_bound, mu.upper_bound,
                        v.level, f"{time.time() - t0:.1f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
