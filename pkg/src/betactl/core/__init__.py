"""Numerical core: oracles, solvers, and convexity certificates."""
