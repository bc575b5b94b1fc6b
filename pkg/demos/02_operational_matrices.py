"""Operational matrices turn calculus on expansions into matrix products.

For u = c @ psi, the transformed function has coefficients M.T @ c.

Run: python demos/02_operational_matrices.py
"""

import numpy as np

from fside import BasisSpec, caputo_matrix, derivative_matrix, eval_basis_vector, integration_matrix_1d, project
from fside.special import gamma

spec = BasisSpec(0.0, 1.0, 8)
t = np.linspace(0.0, 1.0, 5)
c = project(spec, lambda s: s**3).coeffs

d1 = derivative_matrix(spec).data.T @ c
print("d/dt t^3 at", t, "->", np.round(d1 @ eval_basis_vector(spec, t), 12))

integ = integration_matrix_1d(spec).data.T @ c
print("int_0^t s^3 ds ->", np.round(integ @ eval_basis_vector(spec, t), 12))

# Caputo derivative of order 0.75: exact answer 6 t^2.25 / Gamma(3.25).
print("\n m   max |D^0.75 t^3 - exact|")
grid = np.linspace(0, 1, 50)
exact = 6 * grid**2.25 / gamma(3.25)
for m in (4, 6, 8, 10):
    s = BasisSpec(0.0, 1.0, m)
    cm = project(s, lambda x: x**3).coeffs
    approx = cm @ caputo_matrix(s, 0.75).data @ eval_basis_vector(s, grid)
    print(f"{m:2d}   {np.max(np.abs(approx - exact)):.3e}")
