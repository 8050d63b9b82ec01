"""Plane Cremona maps: exact algebra, base points in the bubble space, and
the dynamics of base points under iteration."""

import os

# keep sympy's rationals identical to the gmpy2 mpq values stored here
os.environ.setdefault("SYMPY_GROUND_TYPES", "gmpy")

__version__ = "0.1.0"
