"""Grids, entropy values, and the degree-1 limit.

Run: python3 demos/entropy_basics.py
"""

import numpy as np

from infostab import (
    SimplexGrid,
    alpha_entropy,
    entropy_limit_gap,
    shannon_entropy,
    validate_distribution,
)

# the uniform distribution maximises Shannon entropy: H_3 = log2(3)
u3 = np.array([1 / 3, 1 / 3, 1 / 3])
validate_distribution(u3)
print(f"H_3(1/3,1/3,1/3)      = {shannon_entropy(u3):.15f}")
print(f"log2(3)               = {np.log2(3.0):.15f}")

# normalization holds at every degree
half = np.array([0.5, 0.5])
for a in (0.5, 1.0, 2.0, 3.0):
    print(f"H^{a:<4}(1/2,1/2)      = {alpha_entropy(half, a):.15f}")

# degree-alpha entropies converge to Shannon as alpha -> 1
p = np.array([0.7, 0.2, 0.1])
for d in (1e-2, 1e-3, 1e-4):
    gap = entropy_limit_gap(p, d)
    print(f"sup|H^(1+/-{d:g}) - H| = {gap:.3e}")

# simplex lattices: open keeps every coordinate >= 1/R
g_open = SimplexGrid(3, 8)
g_closed = SimplexGrid(3, 8, closed=True)
print(f"\nGamma_3 at R=8: open {g_open.points.shape[0]} points, "
      f"closed {g_closed.points.shape[0]} points")
print("first three open points:")
for row in g_open.points[:3]:
    print("   ", row)

# entropy is largest at the barycenter, smallest near the corners
vals = shannon_entropy(g_open.points)
print(f"H over the open lattice: min {vals.min():.6f}  max {vals.max():.6f}")
