"""Dense real linear algebra used by the operational-matrix machinery.

Matrices are plain 2-D float64 ``numpy`` arrays and coefficient vectors are
1-D arrays. The helpers here add the dimension and finiteness checks the
rest of the package relies on.
"""

from __future__ import annotations

import sys
import warnings

import numpy as np

# one-norm condition estimate above which a warning is emitted
CONDITION_WARN = 1e10
# relative pivot threshold for declaring a matrix singular
PIVOT_TOL = 1e-14


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when elimination meets a negligible pivot."""

    def __init__(self, column: int, pivot: float):
        self.column = column
        self.pivot = pivot
        super().__init__(f"matrix is singular to working precision at column {column} (pivot {pivot:.3e})")


class IllConditionedWarning(RuntimeWarning):
    pass


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows * cols > sys.maxsize // 8:
        raise MemoryError(f"kron result of shape ({rows}, {cols}) is too large")
    return np.kron(a, b)


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def matvec(a, v) -> np.ndarray:
    a = as_matrix(a)
    v = as_vector(v)
    if a.shape[1] != v.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by vector of length {v.shape[0]}")
    return a @ v


def transpose(a) -> np.ndarray:
    return as_matrix(a).T.copy()


def condition_estimate(a) -> float:
    """One-norm condition number ``||a||_1 ||a^-1||_1`` (inf if singular)."""
    a = as_matrix(a)
    try:
        return float(np.linalg.cond(a, 1))
    except np.linalg.LinAlgError:
        return float("inf")


def solve_linear(a, b, *, warn: bool = True) -> np.ndarray:
    """Solve ``a x = b`` by Gaussian elimination with partial pivoting.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below ``1e-14 * ||a||_inf``; carries the column index.
    """
    a = as_matrix(a)
    b = as_vector(b)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"system matrix must be square, got {a.shape}")
    if b.shape[0] != n:
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {n}")

    scale = np.abs(a).sum(axis=1).max() if n else 0.0
    tol = PIVOT_TOL * scale
    if warn and n:
        cond = condition_estimate(a)
        if cond > CONDITION_WARN:
            warnings.warn(f"system condition estimate {cond:.2e} exceeds {CONDITION_WARN:.0e}", IllConditionedWarning, stacklevel=2)

    u = a.copy()
    x = b.copy()
    for k in range(n):
        p = k + int(np.argmax(np.abs(u[k:, k])))
        if abs(u[p, k]) <= tol:
            raise SingularMatrixError(k, float(u[p, k]))
        if p != k:
            u[[k, p]] = u[[p, k]]
            x[[k, p]] = x[[p, k]]
        factors = u[k + 1:, k] / u[k, k]
        u[k + 1:, k:] -= np.outer(factors, u[k, k:])
        x[k + 1:] -= factors * x[k]

    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - u[k, k + 1:] @ x[k + 1:]) / u[k, k]
    return x
