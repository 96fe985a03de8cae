"""Numerical toolkit for minimum output entropy of random quantum channels.

Stinespring channels built from Haar unitaries, entropy and norm bounds,
a multi-start optimizer for the minimum output entropy, and a seeded
Monte Carlo harness that checks the concentration estimates used in
additivity counterexamples.
"""

__version__ = "0.1.0"
