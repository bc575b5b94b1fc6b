"""Solve the two built-in equations and an ensemble of noisy runs.

Example 1 without noise has the exact solution t^3, so the error can be
measured directly; Example 2 is judged by its residual.

Run: python demos/04_solving_examples.py
"""

import numpy as np

from fside import SolverConfig, error_function, example1, example2, solve, solve_ensemble, theoretical_bound

print(" m   max|t^3 - f_m|   residual     bound")
for m in (3, 5, 7, 9):
    sol = solve(example1(sigma=0.0), SolverConfig(m=m))
    err = np.max(np.abs(error_function(sol, lambda t: t**3).values))
    print(f"{m:2d}   {err:.3e}       {sol.residual_max:.3e}   {theoretical_bound(example1(), m):.3e}")

sol = solve(example2(sigma=0.0), SolverConfig(m=9))
print(f"\nExample 2 without noise, m=9: f(1) = {sol(1.0):.6f}, residual {sol.residual_max:.2e}")

stats = solve_ensemble(example2(sigma=1.0), SolverConfig(m=7, seed=42), n_paths=200)
print("\nExample 2 with noise, 200 paths")
print("   t     mean      std      q05      q95")
for k in range(0, 101, 25):
    print(f"{stats.grid[k]:.2f}  {stats.mean[k]:8.4f} {stats.std[k]:8.4f} {stats.q05[k]:8.4f} {stats.q95[k]:8.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.fill_between(stats.grid, stats.q05, stats.q95, alpha=0.3, label="5-95%")
    ax.plot(stats.grid, stats.mean, label="mean")
    ax.set_xlabel("t")
    ax.set_ylabel("f(t)")
    ax.legend()
    fig.savefig("example2_ensemble.png", dpi=120)
    print("\nwrote example2_ensemble.png")
