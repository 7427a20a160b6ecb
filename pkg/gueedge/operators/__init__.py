"""
Numerical operators for gueedge.
"""

from . import airy_ops, edgeworth, gue_mc, hermite_n, painleve2, quad, specfun

__all__ = [
    "airy_ops",
    "edgeworth",
    "gue_mc",
    "hermite_n",
    "painleve2",
    "quad",
    "specfun",
]
