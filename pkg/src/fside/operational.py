"""Operational matrices acting on shifted Legendre vectors.

Every matrix ``M`` here represents an operator ``T`` through
``T[psi](x) ~ M @ psi(x)``: row ``i`` holds the expansion of ``T[P_i]``. For a
function with coefficient vector ``c`` (``u = c @ psi``) the transformed
coefficients are therefore ``M.T @ c``.

Two-dimensional matrices act on ``P(x, t) = kron(psi(x), psi(t))``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .legendre import BasisSpec
from .linalg import kron
from .special import ceil_order


@dataclass(frozen=True)
class OpMatrix:
    kind: str
    spec: BasisSpec
    data: np.ndarray
    spec_t: BasisSpec | None = None
    alpha: float | None = None

    def __post_init__(self) -> None:
        self.data.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.data, dtype=dtype)


def derivative_matrix(spec: BasisSpec) -> OpMatrix:
    """``d/dx psi = Lambda @ psi``.

    ``P_i' = 2/(b - a) * sum (2j + 1) P_j`` over ``j = i-1, i-3, ... >= 0``.
    """
    n = spec.size
    data = np.zeros((n, n))
    for i in range(1, n):
        j = np.arange(i - 1, -1, -2)
        data[i, j] = 2.0 * (2 * j + 1) / spec.length
    return OpMatrix("derivative", spec, data)


def _caputo_theta(i: int, j: int, k: int, alpha) -> "mpmath.mpf":
    total = mpmath.mpf(0)
    for l in range(j + 1):
        num = math.factorial(i + k) * math.factorial(l + j)
        den = math.factorial(i - k) * math.factorial(k) * math.factorial(j - l) * math.factorial(l) ** 2
        term = mpmath.mpf(num) / den / (mpmath.gamma(k - alpha + 1) * (k + l - alpha + 1))
        total += -term if (i + j + k + l) % 2 else term
    return (2 * j + 1) * total


_caputo_lock = threading.Lock()


@lru_cache(maxsize=128)
def _caputo_data(m: int, alpha: float, length: float) -> np.ndarray:
    # the alternating sums cancel badly in float64 once (i + k)! is large
    n = m + 1
    r = ceil_order(alpha)
    data = np.zeros((n, n))
    with mpmath.workdps(30 + 2 * n):
        a = mpmath.mpf(alpha) if abs(alpha - round(alpha)) > 1e-12 else mpmath.mpf(round(alpha))
        for i in range(r, n):
            for j in range(n):
                data[i, j] = float(sum(_caputo_theta(i, j, k, a) for k in range(r, i + 1)))
    data *= length ** (-alpha)
    data.setflags(write=False)
    return data


def caputo_matrix(spec: BasisSpec, alpha: float) -> OpMatrix:
    """Caputo derivative of order ``alpha`` (based at ``a = 0``): ``D^alpha psi ~ D @ psi``.

    Entry ``(i, j)`` is the ``P_j`` coefficient of the projected
    ``D^alpha P_i``; the first ``ceil(alpha)`` rows vanish. Cached per
    ``(m, alpha, b)``.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if spec.a != 0:
        raise ValueError("the Caputo matrix is defined for intervals starting at 0")
    with _caputo_lock:
        data = _caputo_data(spec.m, float(alpha), float(spec.length))
    return OpMatrix("caputo", spec, data.copy(), alpha=float(alpha))


def integration_stencil(m: int) -> np.ndarray:
    """Unscaled integration stencil on ``[-1, 1]``.

    Row 0 is ``[1, 1, 0, ...]`` and row ``i`` has ``-1/(2i+1)`` at ``i - 1``
    and ``1/(2i+1)`` at ``i + 1``; the ``P_{m+1}`` term of the last row is dropped.
    """
    n = m + 1
    s = np.zeros((n, n))
    s[0, 0] = 1.0
    if n > 1:
        s[0, 1] = 1.0
    for i in range(1, n):
        s[i, i - 1] = -1.0 / (2 * i + 1)
        if i + 1 < n:
            s[i, i + 1] = 1.0 / (2 * i + 1)
    return s


def integration_matrix_1d(spec: BasisSpec) -> OpMatrix:
    """``integral_a^x psi(s) ds ~ P @ psi(x)`` with ``P = (b - a)/2 * stencil``."""
    return OpMatrix("integrate", spec, 0.5 * spec.length * integration_stencil(spec.m))


def antiderivative_matrix(spec: BasisSpec) -> np.ndarray:
    """Untruncated ``(m + 1) x (m + 2)`` form: ``integral_a^x psi = A @ psi_{m+1}(x)`` exactly."""
    stencil = integration_stencil(spec.m + 1)[: spec.size]
    return 0.5 * spec.length * stencil


def _check_same_degree(spec_x: BasisSpec, spec_t: BasisSpec) -> None:
    if spec_x.m != spec_t.m:
        raise ValueError(f"2-D operators need equal degrees, got {spec_x.m} and {spec_t.m}")


def q3_matrix(spec_x: BasisSpec, spec_t: BasisSpec) -> OpMatrix:
    """Partial integration in ``x``: ``integral_0^x P(s, t) ds ~ Q3 @ P(x, t)``."""
    _check_same_degree(spec_x, spec_t)
    data = kron(integration_matrix_1d(spec_x).data, np.eye(spec_t.size))
    return OpMatrix("integrate_x", spec_x, data, spec_t=spec_t)


def q4_matrix(spec_x: BasisSpec, spec_t: BasisSpec) -> OpMatrix:
    """Partial integration in ``t``: block diagonal with the 1-D matrix of the ``t`` basis."""
    _check_same_degree(spec_x, spec_t)
    data = kron(np.eye(spec_x.size), integration_matrix_1d(spec_t).data)
    return OpMatrix("integrate_t", spec_x, data, spec_t=spec_t)


def w_matrix(spec_x: BasisSpec, spec_t: BasisSpec) -> OpMatrix:
    """Double integral ``int_0^x int_0^t P(s, z) dz ds ~ kron(Q1, Q2) @ P(x, t)``."""
    _check_same_degree(spec_x, spec_t)
    data = kron(integration_matrix_1d(spec_x).data, integration_matrix_1d(spec_t).data)
    return OpMatrix("kron2d", spec_x, data, spec_t=spec_t)
