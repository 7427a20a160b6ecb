"""
gueedge - finite-n edge statistics of the Gaussian Unitary Ensemble

A numerical library and CLI that evaluates the largest-eigenvalue
distribution of GUE_n exactly (Fredholm determinant and resolvent
routes), its Tracy-Widom limit (Airy-kernel determinant and
Hastings-McLeod routes), and the Edgeworth corrections between them.
"""

__version__ = "0.1.0"
__author__ = "gueedge contributors"
