"""Brownian, fractional Brownian and geometric paths with fixed seeds.

Run: python demos/03_random_paths.py
"""

import numpy as np

from fside import gbm_path, ito_sum, sample_brownian, sample_fbm, uniform_partition
from fside.stochastic import derive_seed

grid = uniform_partition(0.0, 1.0, 250)
bm = sample_brownian(grid, seed=42)
print(f"B(0) = {bm.values[0]}, B(1) = {bm.values[-1]:.4f}")

# Left-point sums of 1 telescope to B(1); the Ito isometry shows up on average.
print("ito_sum(1) - B(1) =", ito_sum(lambda s: 1.0, bm) - bm.values[-1])
sums = np.array([ito_sum(lambda s: s, sample_brownian(grid, derive_seed(7, i))) for i in range(2000)])
print(f"mean of int t dB = {sums.mean():+.4f}, mean square = {np.mean(sums**2):.4f} (theory 1/3)")

for h in (0.3, 0.5, 0.8):
    p = sample_fbm(grid, seed=1, hurst=h)
    rough = np.mean(np.abs(p.increments))
    print(f"H = {h}: mean |increment| = {rough:.4f}")

t, x = gbm_path(x0=1.0, mu=0.1, sigma=0.2, hurst=0.5, partition=grid, seed=3)
print(f"GBM: X(0) = {x[0]}, X(1) = {x[-1]:.4f}")
