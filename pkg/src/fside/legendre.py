"""Shifted Legendre polynomials on an interval ``[a, b]``.

``P_i(x) = L_i((2x - a - b) / (b - a))`` where ``L_i`` is the classical
Legendre polynomial. They satisfy ``P_i(a) = (-1)**i``, ``P_i(b) = 1`` and

    integral_a^b P_i P_j dx = (b - a) / (2i + 1) * delta_ij.

Truncated expansions ``u(x) ~ sum_j c_j P_j(x)`` are stored as coefficient
vectors; bivariate expansions use the row-major ordering
``c_00, c_01, ..., c_0m, c_10, ...`` with the first index on ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

# slack when checking that evaluation points lie inside [a, b]
DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class BasisSpec:
    """Interval ``[a, b]`` and truncation degree ``m`` (``m + 1`` functions)."""

    a: float = 0.0
    b: float = 1.0
    m: int = 7

    def __post_init__(self) -> None:
        if not self.b > self.a:
            raise ValueError(f"need b > a, got [{self.a}, {self.b}]")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"degree m must be an integer >= 1, got {self.m}")

    @property
    def size(self) -> int:
        return self.m + 1

    @property
    def length(self) -> float:
        return self.b - self.a

    def with_degree(self, m: int) -> "BasisSpec":
        return BasisSpec(self.a, self.b, m)


def to_reference(spec: BasisSpec, x) -> np.ndarray:
    """Map points of ``[a, b]`` onto ``[-1, 1]``, rejecting points outside."""
    x = np.asarray(x, dtype=float)
    slack = DOMAIN_SLACK * max(1.0, spec.length)
    if np.any(x < spec.a - slack) or np.any(x > spec.b + slack):
        raise ValueError(f"points outside the interval [{spec.a}, {spec.b}]")
    return np.clip((2.0 * x - spec.a - spec.b) / spec.length, -1.0, 1.0)


def _legendre_upto(n: int, y: np.ndarray) -> np.ndarray:
    """Rows ``L_0(y) .. L_n(y)`` by the three-term recurrence."""
    out = np.empty((n + 1,) + y.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = y
    for i in range(1, n):
        out[i + 1] = ((2 * i + 1) * y * out[i] - i * out[i - 1]) / (i + 1)
    return out


def eval_basis_vector(spec: BasisSpec, x) -> np.ndarray:
    """``psi(x) = [P_0(x), ..., P_m(x)]``; shape ``(m + 1,) + shape(x)``."""
    return _legendre_upto(spec.m, to_reference(spec, x))


def eval_basis(spec: BasisSpec, i: int, x):
    """Evaluate ``P_i`` at ``x`` (scalar or array)."""
    if not 0 <= i <= spec.m:
        raise ValueError(f"index {i} outside 0..{spec.m}")
    values = _legendre_upto(i, to_reference(spec, x))[i]
    return float(values) if values.ndim == 0 else values


@lru_cache(maxsize=None)
def monomial_coefficients(i: int) -> tuple[int, ...]:
    """Exact integer coefficients of ``P_i`` in powers of ``u = (x - a)/(b - a)``.

    ``P_i = sum_k (-1)**(i + k) (i + k)! / ((i - k)! (k!)**2) u**k``.
    """
    return tuple(
        (-1) ** (i + k) * math.factorial(i + k) // (math.factorial(i - k) * math.factorial(k) ** 2)
        for k in range(i + 1)
    )


def eval_closed_form(spec: BasisSpec, i: int, x) -> np.ndarray:
    """``P_i`` from its explicit power-sum form (independent of the recurrence).

    The sum alternates with large integer weights, so it is accumulated in
    exact rational arithmetic from the floating-point ``u`` and rounded once.
    """
    u = (np.asarray(x, dtype=float) - spec.a) / spec.length
    coeffs = monomial_coefficients(i)

    def one(v: float) -> float:
        v = Fraction(v)
        return float(sum(c * v**k for k, c in enumerate(coeffs)))

    out = np.array([one(v) for v in u.ravel()]).reshape(u.shape)
    return out if out.ndim else out[()]


def legendre_to_monomial(coeffs) -> np.ndarray:
    """Convert ``sum_j c_j P_j`` into power coefficients in ``u = (x - a)/(b - a)``."""
    coeffs = np.asarray(coeffs, dtype=float)
    out = np.zeros(len(coeffs))
    for j, c in enumerate(coeffs):
        if c:
            out[: j + 1] += c * np.array(monomial_coefficients(j), dtype=float)
    return out


def _reference_roots(k: int, tol: float = 1e-15, max_iter: int = 100) -> np.ndarray:
    """Roots of ``L_k`` on ``(-1, 1)``: Newton from cosine guesses, bisection fallback."""
    j = np.arange(1, k + 1)
    y = -np.cos(np.pi * (4 * j - 1) / (4 * k + 2))
    for _ in range(max_iter):
        vals = _legendre_upto(k, y)
        p, q = vals[k], vals[k - 1]
        dp = k * (y * p - q) / (y * y - 1.0)
        step = p / dp
        y = y - step
        if np.max(np.abs(step)) < tol:
            break
    ok = np.all(np.isfinite(y)) and np.all(np.diff(y) > 0) and np.all(np.abs(y) < 1)
    if ok:
        resid = np.abs(_legendre_upto(k, y)[k])
        ok = bool(np.all(resid <= 1e-12))
    if not ok:
        y = _bisection_roots(k)
    return y


def _bisection_roots(k: int) -> np.ndarray:
    grid = -np.cos(np.linspace(0.0, np.pi, 40 * k + 2))
    vals = _legendre_upto(k, grid)[k]
    brackets = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if len(brackets) != k:
        raise ArithmeticError(f"could not bracket the {k} roots of P_{k}")
    lo, hi = grid[brackets].copy(), grid[brackets + 1].copy()
    flo = vals[brackets].copy()
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = _legendre_upto(k, mid)[k]
        left = np.sign(fmid) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fmid, flo)
        hi = np.where(left, hi, mid)
        if np.max(hi - lo) < 1e-16:
            break
    return 0.5 * (lo + hi)


def basis_roots(spec: BasisSpec, k: int) -> np.ndarray:
    """The ``k`` roots of ``P_k`` in ``(a, b)``, increasing."""
    if not 1 <= k <= spec.m + 1:
        raise ValueError(f"k must be in 1..{spec.m + 1}, got {k}")
    y = _reference_roots(k)
    return spec.a + 0.5 * spec.length * (y + 1.0)


@lru_cache(maxsize=64)
def _reference_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    y = _reference_roots(n)
    vals = _legendre_upto(n, y)
    dp = n * (y * vals[n] - vals[n - 1]) / (y * y - 1.0)
    w = 2.0 / ((1.0 - y * y) * dp * dp)
    y.setflags(write=False)
    w.setflags(write=False)
    return y, w


def gauss_quadrature(spec: BasisSpec, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[a, b]``, exact to degree ``2n - 1``."""
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    y, w = _reference_rule(n)
    half = 0.5 * spec.length
    return spec.a + half * (y + 1.0), half * w


def _call_grid(u: Callable, *args: np.ndarray) -> np.ndarray:
    """Evaluate ``u`` on arrays, falling back to a scalar loop for non-vectorised callables."""
    try:
        values = np.asarray(u(*args), dtype=float)
    except TypeError:
        values = None
    if values is not None and values.ndim == 0:
        values = np.broadcast_to(values, args[0].shape)
    if values is None or values.shape != args[0].shape:
        values = np.vectorize(u, otypes=[float])(*args)
    return values


@dataclass(frozen=True)
class Expansion:
    """Truncated expansion ``sum_j coeffs[j] P_j``."""

    spec: BasisSpec
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.shape != (self.spec.size,):
            raise ValueError(f"expected {self.spec.size} coefficients, got shape {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, x):
        values = self.coeffs @ eval_basis_vector(self.spec, x)
        return float(values) if np.ndim(values) == 0 else values


@dataclass(frozen=True)
class Expansion2D:
    """Truncated double expansion ``sum_{r,s} c_rs P_r(x) P_s(t)``, row-major flattened."""

    spec_x: BasisSpec
    spec_t: BasisSpec
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=float).ravel()
        if coeffs.shape != (self.spec_x.size * self.spec_t.size,):
            raise ValueError("coefficient count does not match the two bases")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def matrix(self) -> np.ndarray:
        return self.coeffs.reshape(self.spec_x.size, self.spec_t.size)

    def __call__(self, x, t):
        px = eval_basis_vector(self.spec_x, x)
        pt = eval_basis_vector(self.spec_t, t)
        values = np.einsum("r...,rs,s...->...", px, self.matrix, pt)
        return float(values) if np.ndim(values) == 0 else values


def project(spec: BasisSpec, u: Callable, n_nodes: int | None = None) -> Expansion:
    """Orthogonal projection ``c_j = (2j + 1)/(b - a) * integral u P_j``.

    Integrals use Gauss-Legendre with ``m + 8`` nodes unless ``n_nodes`` is given.
    """
    nodes, weights = gauss_quadrature(spec, n_nodes or spec.m + 8)
    values = _call_grid(u, nodes)
    psi = eval_basis_vector(spec, nodes)
    norms = (2 * np.arange(spec.size) + 1) / spec.length
    return Expansion(spec, norms * (psi @ (weights * values)))


def project_2d(spec_x: BasisSpec, spec_t: BasisSpec, u: Callable, n_nodes: int | None = None) -> Expansion2D:
    """Tensor-product projection of ``u(x, t)`` onto ``P_r(x) P_s(t)``."""
    nx, wx = gauss_quadrature(spec_x, n_nodes or spec_x.m + 8)
    nt, wt = gauss_quadrature(spec_t, n_nodes or spec_t.m + 8)
    X, T = np.meshgrid(nx, nt, indexing="ij")
    values = _call_grid(u, X, T)
    px = eval_basis_vector(spec_x, nx) * wx
    pt = eval_basis_vector(spec_t, nt) * wt
    norm_x = (2 * np.arange(spec_x.size) + 1) / spec_x.length
    norm_t = (2 * np.arange(spec_t.size) + 1) / spec_t.length
    coeffs = np.outer(norm_x, norm_t) * (px @ values @ pt.T)
    return Expansion2D(spec_x, spec_t, coeffs.ravel())


def phi_block_matrix(spec: BasisSpec, t: float) -> np.ndarray:
    """The ``(m+1) x (m+1)**2`` matrix with ``psi(t)`` on a staircase of blocks.

    ``psi(x) @ phi_block_matrix(spec, t) @ c`` evaluates the flattened double
    expansion ``c`` at ``(x, t)``.
    """
    if np.ndim(t) != 0:
        raise ValueError("phi_block_matrix takes a scalar t")
    psi = eval_basis_vector(spec, t)
    return np.kron(np.eye(spec.size), psi[None, :])


@lru_cache(maxsize=32)
def _product_tensor(spec: BasisSpec) -> np.ndarray:
    n = (3 * spec.m) // 2 + 2
    nodes, weights = gauss_quadrature(spec, n)
    psi = eval_basis_vector(spec, nodes)
    norms = (2 * np.arange(spec.size) + 1) / spec.length
    g = np.einsum("rq,iq,jq,q->rij", psi, psi, psi, weights) * norms
    g.setflags(write=False)
    return g


def product_tensor(spec: BasisSpec) -> np.ndarray:
    """``G[r, i, j]`` with ``P_r P_i = sum_j G[r, i, j] P_j`` (truncated at degree m)."""
    return _product_tensor(spec)
