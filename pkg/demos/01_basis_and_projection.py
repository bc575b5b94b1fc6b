"""Shifted Legendre basis on [0, 1]: values, roots, quadrature and projection.

Run: python demos/01_basis_and_projection.py
"""

import math

import numpy as np

from fside import BasisSpec, basis_roots, eval_basis_vector, gauss_quadrature, project

spec = BasisSpec(0.0, 1.0, 6)

# Endpoint values follow the parity rule: +-1 at 0, all ones at 1.
print("psi(0) =", eval_basis_vector(spec, 0.0))
print("psi(1) =", eval_basis_vector(spec, 1.0))

# The solver collocates at the roots of P_m.
print("roots of P_6:", np.round(basis_roots(spec, 6), 6))

# A 5-point Gauss rule integrates x^9 exactly.
x, w = gauss_quadrature(spec, 5)
print("int_0^1 x^9 dx =", w @ x**9, "(exact 0.1)")

# Projecting a smooth function: the L2 error falls off like 1/((m+1)! 4^m).
print("\n m   ||sin - sin_m||_2")
for m in range(2, 11, 2):
    s = BasisSpec(0.0, 1.0, m)
    e = project(s, np.sin)
    xq, wq = gauss_quadrature(s, 40)
    err = math.sqrt(wq @ (np.sin(xq) - e(xq)) ** 2)
    print(f"{m:2d}   {err:.3e}")
