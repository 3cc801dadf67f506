"""Exact machinery for finite-type invariants of 3-manifolds.

Surgery brackets, Conway-polynomial invariants, truncated quantum SO(3)
invariants with p-order and p-depth, the Rochlin invariant of spin surgery
presentations, and the ranks of the graded Feynman-diagram quotients.
"""

__version__ = "0.1.0"
