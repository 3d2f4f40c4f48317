"""Exact finite-level computations on congruence towers of matrix groups.

Everything here is exact integer / rational arithmetic: matrix groups over
Z/ell^n, coset and double-coset counting, lower-numbering ramification
filtrations with Herbrand transfer, a Riemann-Hurwitz genus engine for
covers given by pure group data, Frattini projective systems, and
log/bracket diagnostics for the group's Lie lattice.
"""

__version__ = "0.1.0"

DEFAULT_GROUP_CAP = 2_000_000
DEFAULT_LATTICE_CAP = 10_000
