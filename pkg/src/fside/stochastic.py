"""Brownian and fractional Brownian paths, Ito sums and stochastic operational matrices.

A :class:`BrownianPath` stores exact samples on a partition. Between
partition points the path is extended linearly; both the solver and the
direct Ito-sum checks use that same continuous extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .legendre import BasisSpec, eval_basis_vector, gauss_quadrature
from .linalg import kron
from .operational import antiderivative_matrix, integration_stencil

# diagonal shift applied before factorising fBm covariances
FBM_JITTER = 1e-12


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream for one path."""
    return np.random.Generator(np.random.Philox(int(seed)))


def derive_seed(master_seed: int, index: int) -> int:
    """Deterministic 64-bit seed for path ``index`` of an ensemble."""
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    return int(seq.generate_state(1, np.uint64)[0])


def uniform_partition(a: float = 0.0, b: float = 1.0, n_cells: int = 8) -> np.ndarray:
    if n_cells < 1:
        raise ValueError("a partition needs at least one cell")
    return np.linspace(a, b, n_cells + 1)


def _check_partition(partition) -> np.ndarray:
    partition = np.asarray(partition, dtype=float)
    if partition.ndim != 1 or len(partition) < 2:
        raise ValueError("partition needs at least two points")
    if np.any(np.diff(partition) <= 0):
        raise ValueError("partition must be strictly increasing")
    if partition[0] < 0:
        raise ValueError("partition must start at a non-negative time")
    return partition


@dataclass(frozen=True)
class BrownianPath:
    partition: np.ndarray
    values: np.ndarray
    seed: int | None = None
    hurst: float = 0.5

    def __post_init__(self) -> None:
        partition = _check_partition(self.partition)
        values = np.asarray(self.values, dtype=float)
        if values.shape != partition.shape:
            raise ValueError("values and partition differ in length")
        if values[0] != 0.0:
            raise ValueError("a path must start at zero")
        if not 0 < self.hurst <= 1:
            raise ValueError(f"hurst must lie in (0, 1], got {self.hurst}")
        partition.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "values", values)

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values)

    @property
    def n_cells(self) -> int:
        return len(self.partition) - 1

    def __call__(self, t):
        """Path value at ``t`` (linear between partition points)."""
        t = np.asarray(t, dtype=float)
        if np.any(t < self.partition[0] - 1e-12) or np.any(t > self.partition[-1] + 1e-12):
            raise ValueError("time outside the path's partition")
        out = np.interp(t, self.partition, self.values)
        return float(out) if out.ndim == 0 else out

    def refined(self, factor: int) -> "BrownianPath":
        """Same path on a partition with each cell split ``factor`` times."""
        if factor < 1:
            raise ValueError("refinement factor must be >= 1")
        frac = np.arange(factor) / factor
        left, width = self.partition[:-1], np.diff(self.partition)
        fine = np.append((left[:, None] + frac * width[:, None]).ravel(), self.partition[-1])
        return BrownianPath(fine, self(fine), self.seed, self.hurst)

    def clipped(self, t: float) -> "BrownianPath":
        """Restriction of the path to ``[partition[0], t]``."""
        if t <= self.partition[0]:
            raise ValueError("clip time must exceed the path start")
        inner = self.partition[(self.partition > self.partition[0]) & (self.partition < t)]
        points = np.concatenate(([self.partition[0]], inner, [t]))
        return BrownianPath(points, self(points), self.seed, self.hurst)


def sample_brownian(partition, seed: int) -> BrownianPath:
    """Standard Brownian motion on ``partition``: independent ``N(0, dt)`` increments."""
    partition = _check_partition(partition)
    rng = make_rng(seed)
    dB = rng.standard_normal(len(partition) - 1) * np.sqrt(np.diff(partition))
    return BrownianPath(partition, np.concatenate(([0.0], np.cumsum(dB))), seed, 0.5)


def fbm_covariance(times, hurst: float) -> np.ndarray:
    """``Cov(B_H(t), B_H(s)) = (t^2H + s^2H - |t - s|^2H) / 2``."""
    t = np.asarray(times, dtype=float)
    h2 = 2.0 * hurst
    return 0.5 * (t[:, None] ** h2 + t[None, :] ** h2 - np.abs(t[:, None] - t[None, :]) ** h2)


def sample_fbm(partition, seed: int, hurst: float) -> BrownianPath:
    """Fractional Brownian motion by Cholesky factorisation of its covariance."""
    if not 0 < hurst < 1:
        raise ValueError(f"hurst must lie in (0, 1), got {hurst}")
    partition = _check_partition(partition)
    times = partition[1:] - partition[0]
    cov = fbm_covariance(times, hurst) + FBM_JITTER * np.eye(len(times))
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError("fBm covariance is not positive definite") from exc
    z = make_rng(seed).standard_normal(len(times))
    return BrownianPath(partition, np.concatenate(([0.0], chol @ z)), seed, hurst)


def ito_sum(f: Callable, path: BrownianPath) -> float:
    """Left-point sum ``sum f(t_{i-1}) (B(t_i) - B(t_{i-1}))``."""
    left = path.partition[:-1]
    values = np.broadcast_to(np.asarray(f(left), dtype=float), left.shape)
    return float(values @ path.increments)


def ito_integral(f: Callable, path: BrownianPath, t: float, refine: int = 1) -> float:
    """Ito sum of ``f`` over ``[start, t]`` on the (optionally refined) path."""
    if t <= path.partition[0]:
        return 0.0
    fine = path.refined(refine) if refine > 1 else path
    return ito_sum(f, fine.clipped(t))


def gbm_path(x0: float, mu: float, sigma: float, hurst: float, partition, seed: int):
    """``X(t) = x0 * exp((mu - sigma**2)/2 * t + sigma * B_H(t))`` on ``partition``.

    Note the drift ``(mu - sigma**2)/2``; the textbook geometric Brownian
    motion uses ``mu - sigma**2/2`` instead.
    """
    if x0 <= 0:
        raise ValueError("x0 must be positive")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if hurst == 0.5:
        path = sample_brownian(partition, seed)
    else:
        path = sample_fbm(partition, seed, hurst)
    t = path.partition
    x = x0 * np.exp(0.5 * (mu - sigma**2) * t + sigma * path.values)
    x[0] = x0
    return t, x


def stochastic_q3(path: BrownianPath, spec: BasisSpec) -> np.ndarray:
    """Block matrix with the 2-D integration stencil and increment blocks.

    Block ``(r, j)`` is ``(b - a)/2 * stencil[r, j] * diag(increments)``, so
    the increment diagonal takes the place of the identity blocks of the
    deterministic ``Q3``. Requires ``m + 1`` path cells.
    """
    if path.n_cells != spec.size:
        raise ValueError(f"path has {path.n_cells} cells, basis needs {spec.size}")
    stencil = 0.5 * spec.length * integration_stencil(spec.m)
    return kron(stencil, np.diag(path.increments))


def _check_cover(path: BrownianPath, spec: BasisSpec) -> None:
    if abs(path.partition[0] - spec.a) > 1e-12 or abs(path.partition[-1] - spec.b) > 1e-12:
        raise ValueError("path partition must span the basis interval")


def stochastic_integration_matrix(path: BrownianPath, spec: BasisSpec, t) -> np.ndarray:
    """Matrix ``Q(t)`` with ``integral_a^t psi dB = Q(t) @ increments``.

    Each increment is spread uniformly over its cell (the path is linear
    there), so column ``i`` is ``integral psi ds`` over cell ``i`` clipped at
    ``t``, divided by the cell width. The cell integrals come from the exact
    antiderivative matrix. Shape ``(m + 1, n_cells) + shape(t)``.
    """
    _check_cover(path, spec)
    t = np.asarray(t, dtype=float)
    left, right = path.partition[:-1], path.partition[1:]
    hi = np.clip(t[..., None], left, right)
    ext = spec.with_degree(spec.m + 1)
    anti = antiderivative_matrix(spec)
    upper = np.tensordot(anti, eval_basis_vector(ext, hi), axes=1)
    lower = anti @ eval_basis_vector(ext, left)
    q = (upper - lower.reshape(lower.shape[:1] + (1,) * t.ndim + lower.shape[1:])) / (right - left)
    # (m+1, ..., cells) -> (m+1, cells, ...)
    return np.moveaxis(q, -1, 1)


def basis_ito_integrals(path: BrownianPath, spec: BasisSpec, t) -> np.ndarray:
    """``[integral_a^t P_j dB]_j``; shape ``(m + 1,) + shape(t)``."""
    q = stochastic_integration_matrix(path, spec, t)
    return np.tensordot(np.moveaxis(q, 1, -1), path.increments, axes=([-1], [0]))


def stieltjes_integral(f: Callable, path: BrownianPath, t: float, n_nodes: int = 8) -> float:
    """``integral_start^t f dB`` for the linearly extended path, cell-wise Gauss quadrature."""
    if t <= path.partition[0]:
        return 0.0
    left, right = path.partition[:-1], np.minimum(path.partition[1:], t)
    keep = right > left
    left, right = left[keep], right[keep]
    rate = path.increments[keep] / np.diff(path.partition)[keep]
    nodes, weights = gauss_quadrature(BasisSpec(0.0, 1.0, 1), n_nodes)
    width = right - left
    pts = left[:, None] + width[:, None] * nodes
    vals = np.broadcast_to(np.asarray(f(pts), dtype=float), pts.shape)
    return float(rate @ ((vals * weights).sum(axis=1) * width))
