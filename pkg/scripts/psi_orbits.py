"""Transport Base(psi) along psi^-1 and print where each orbit point lands.

    python scripts/psi_orbits.py --steps 4
"""

import argparse
import time

from cremona.dynamics import Tracker, b_sequence_tracked
from cremona.registry import psi


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=4)
    args = ap.parse_args()

    t0 = time.time()
    tr = Tracker(psi())
    tr.extend(args.steps)
    for j, orbit in enumerate(tr.p_orbits, 1):
        print(f"p_{j}")
        for m in range(args.steps):
            print(f"  m={m}: {orbit.describe(m)}")
    seq, methods = b_sequence_tracked(tr.f, args.steps, tracker=tr)
    print("b(psi^k):", seq, methods)
    print("first collision:", tr.collision())
    print(f"{time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
