"""Collocation solver for fractional stochastic integro-differential equations

    D^alpha f(t) = g(t) + int_0^t k1(s, t) f(s) ds + sigma int_0^t k2(s, t) f(s) dB(s)

on ``[0, 1]`` with ``0 < alpha <= 1`` and ``f(0)`` given. The unknown is
expanded as ``f_m = fbar @ psi``; the Caputo term uses the fractional
operational matrix, the two integrals use 2-D expansions of the kernels
together with the deterministic and stochastic integration matrices. The
equation is collocated at the roots of ``P_m`` and closed by the initial
condition, giving a dense ``(m + 1)``-square linear system.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .legendre import (
    BasisSpec,
    basis_roots,
    eval_basis_vector,
    gauss_quadrature,
    legendre_to_monomial,
    phi_block_matrix,
    product_tensor,
    project,
    project_2d,
)
from .linalg import SingularMatrixError, condition_estimate, solve_linear
from .operational import caputo_matrix, q3_matrix
from .special import caputo_monomial, gamma
from .stochastic import (
    BrownianPath,
    basis_ito_integrals,
    derive_seed,
    ito_integral,
    sample_brownian,
    uniform_partition,
)

log = logging.getLogger(__name__)

RESIDUAL_GRID = 101
# residual Ito sums use the path refined to at most this cell width
ORACLE_CELL = 1e-3
MAX_FAILED_FRACTION = 0.1


class SolverError(ArithmeticError):
    pass


class EnsembleError(SolverError):
    pass


class ResidualWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class FsideProblem:
    """Equation data. Kernels are called as ``k(s, t)`` with ``s`` the integration variable."""

    alpha: float
    g: Callable
    k1: Callable | None = None
    k2: Callable | None = None
    sigma: float = 1.0
    initial_value: float = 0.0
    exact: Callable | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")

    @property
    def stochastic(self) -> bool:
        return self.k2 is not None and self.sigma != 0


@dataclass(frozen=True)
class SolverConfig:
    m: int = 7
    seed: int = 42
    n_cells: int | None = None
    quadrature_order: int | None = None

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"m must be at least 2, got {self.m}")

    @property
    def spec(self) -> BasisSpec:
        return BasisSpec(0.0, 1.0, self.m)

    @property
    def cells(self) -> int:
        return self.n_cells or self.m + 1

    @property
    def nodes(self) -> int:
        return self.quadrature_order or self.m + 8


@dataclass(frozen=True)
class SpectralSolution:
    fbar: np.ndarray
    spec: BasisSpec
    alpha: float
    path: BrownianPath
    system_condition_estimate: float
    residual_max: float = float("nan")
    residual_grid: np.ndarray | None = field(default=None, repr=False)
    residual_values: np.ndarray | None = field(default=None, repr=False)

    def __call__(self, t):
        values = self.fbar @ eval_basis_vector(self.spec, t)
        return float(values) if np.ndim(values) == 0 else values

    def caputo(self, t) -> np.ndarray:
        """Exact Caputo derivative of the polynomial ``f_m`` at ``t``."""
        t = np.asarray(t, dtype=float)
        powers = legendre_to_monomial(self.fbar)
        out = np.zeros_like(t)
        for k, c in enumerate(powers):
            coef, expo = caputo_monomial(k, self.alpha)
            if c and coef:
                out = out + c * coef * t**expo
        return out


@dataclass(frozen=True)
class EnsembleStats:
    grid: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    q05: np.ndarray
    q95: np.ndarray
    n_paths: int
    master_seed: int
    n_failed: int = 0


def expand_inputs(problem: FsideProblem, config: SolverConfig):
    """Legendre coefficients ``(gbar, k1bar, k2bar)``; kernels flattened row-major in ``(s, t)``."""
    spec = config.spec
    n = config.nodes
    gbar = project(spec, problem.g, n).coeffs
    zero = np.zeros(spec.size**2)
    k1bar = project_2d(spec, spec, problem.k1, n).coeffs if problem.k1 is not None else zero
    k2bar = project_2d(spec, spec, problem.k2, n).coeffs if problem.k2 is not None else zero
    return gbar, k1bar, k2bar


def _kernel_times_basis(spec: BasisSpec, kbar: np.ndarray) -> np.ndarray:
    """Row ``i``: flattened 2-D coefficients of ``k(s, t) P_i(s)``."""
    kmat = kbar.reshape(spec.size, spec.size)
    prod = np.einsum("rij,rq->ijq", product_tensor(spec), kmat)
    return prod.reshape(spec.size, -1)


class _Assembler:
    """Path-independent parts of the collocation system, reusable across paths."""

    def __init__(self, problem: FsideProblem, config: SolverConfig):
        self.problem = problem
        self.config = config
        spec = self.spec = config.spec
        self.gbar, self.k1bar, self.k2bar = expand_inputs(problem, config)
        self.q3 = q3_matrix(spec, spec).data
        self.c1 = _kernel_times_basis(spec, self.k1bar)
        self.c2 = _kernel_times_basis(spec, self.k2bar)

        self.points = basis_roots(spec, spec.m)
        psi = eval_basis_vector(spec, self.points).T
        dmat = caputo_matrix(spec, problem.alpha).data
        self.base = np.empty((spec.size, spec.size))
        self.base[0] = eval_basis_vector(spec, 0.0)
        self.base[1:] = psi @ dmat.T - self.deterministic_rows(self.points)
        self.rhs = np.empty(spec.size)
        self.rhs[0] = problem.initial_value
        self.rhs[1:] = psi @ self.gbar

    def deterministic_rows(self, ts) -> np.ndarray:
        """Row ``k`` maps ``fbar`` to ``int_0^t k1(s, t) f(s) ds`` at ``ts[k]``."""
        # psi(t) @ Phi(t) @ Q3.T @ c on the diagonal s = t
        weights = self.c1 @ self.q3
        return np.array([weights @ (phi_block_matrix(self.spec, t).T @ eval_basis_vector(self.spec, t)) for t in ts])

    def stochastic_rows(self, ts, path: BrownianPath) -> np.ndarray:
        """Row ``k`` maps ``fbar`` to ``int_0^t k2(s, t) f(s) dB(s)`` at ``ts[k]``."""
        ts = np.asarray(ts, dtype=float)
        jmat = basis_ito_integrals(path, self.spec, ts)
        psi = eval_basis_vector(self.spec, ts)
        return np.array([self.c2 @ np.kron(jmat[:, k], psi[:, k]) for k in range(len(ts))])

    def system(self, path: BrownianPath | None):
        a = self.base.copy()
        if self.problem.stochastic:
            a[1:] -= self.problem.sigma * self.stochastic_rows(self.points, path)
        return a, self.rhs.copy()


def integral_terms(problem: FsideProblem, config: SolverConfig, fbar, ts, path: BrownianPath | None = None):
    """Operational-matrix values of both integral terms for ``f = fbar @ psi`` at ``ts``.

    The stochastic term is returned unscaled by ``sigma`` (zeros without a path).
    """
    asm = _Assembler(problem, config)
    fbar = np.asarray(fbar, dtype=float)
    det = asm.deterministic_rows(ts) @ fbar
    sto = asm.stochastic_rows(ts, path) @ fbar if path is not None else np.zeros(len(det))
    return det, sto


def sample_solver_path(config: SolverConfig, seed: int | None = None) -> BrownianPath:
    return sample_brownian(uniform_partition(0.0, 1.0, config.cells), config.seed if seed is None else seed)


def assemble_system(problem: FsideProblem, config: SolverConfig, path: BrownianPath | None = None):
    """Collocation matrix and right-hand side for ``fbar``.

    Row 0 imposes ``f_m(0) = initial_value``; rows ``1..m`` collocate at the
    roots of ``P_m``.
    """
    if path is None and problem.stochastic:
        path = sample_solver_path(config)
    return _Assembler(problem, config).system(path)


def _solve_system(a, b, config: SolverConfig) -> np.ndarray:
    try:
        return solve_linear(a, b)
    except SingularMatrixError as exc:
        raise SolverError(f"singular collocation system (m={config.m}, seed={config.seed}): {exc}") from exc


def direct_integrals(problem: FsideProblem, f: Callable, t: float, path: BrownianPath | None, n_nodes: int = 24, refine: int = 1):
    """Both integral terms at ``t`` by Gauss quadrature and Ito sums."""
    if t <= 0:
        return 0.0, 0.0
    det = 0.0
    if problem.k1 is not None:
        s, w = gauss_quadrature(BasisSpec(0.0, t, 1), n_nodes)
        det = float(w @ (np.asarray(problem.k1(s, t), dtype=float) * f(s)))
    sto = 0.0
    if problem.k2 is not None and path is not None:
        sto = ito_integral(lambda s: np.asarray(problem.k2(s, t), dtype=float) * f(s), path, t, refine)
    return det, sto


def oracle_refinement(path: BrownianPath) -> int:
    return max(1, math.ceil(np.max(np.diff(path.partition)) / ORACLE_CELL))


def residual(problem: FsideProblem, solution: SpectralSolution, grid=None):
    """Defect of the exact equation for ``f_m`` on ``grid`` (the perturbation term)."""
    grid = np.linspace(0.0, 1.0, RESIDUAL_GRID) if grid is None else np.asarray(grid, dtype=float)
    lhs = solution.caputo(grid)
    g = np.asarray(problem.g(grid), dtype=float)
    path = solution.path if problem.stochastic else None
    refine = oracle_refinement(path) if path is not None else 1
    out = np.empty_like(grid)
    for k, t in enumerate(grid):
        det, sto = direct_integrals(problem, solution, t, path, refine=refine)
        out[k] = lhs[k] - g[k] - det - problem.sigma * sto
    return grid, out


def solve(problem: FsideProblem, config: SolverConfig, path: BrownianPath | None = None, *, check_residual: bool = True) -> SpectralSolution:
    """Sample a path (from ``config.seed``), assemble, solve and validate."""
    if path is None:
        path = sample_solver_path(config)
    a, b = _Assembler(problem, config).system(path)
    fbar = _solve_system(a, b, config)
    sol = SpectralSolution(fbar, config.spec, problem.alpha, path, condition_estimate(a))
    if not check_residual:
        return sol
    grid, res = residual(problem, sol)
    rmax = float(np.max(np.abs(res)))
    if rmax > 1:
        warnings.warn(f"residual {rmax:.3g} exceeds 1 (m={config.m}); the system may be ill-conditioned", ResidualWarning, stacklevel=2)
    return replace(sol, residual_max=rmax, residual_grid=grid, residual_values=res)


def solve_ensemble(problem: FsideProblem, config: SolverConfig, n_paths: int, grid=None) -> EnsembleStats:
    """Per-point mean, std and 5/95% quantiles of ``f_m`` over independent paths.

    Path ``i`` uses the seed derived from ``(config.seed, i)``.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    grid = np.linspace(0.0, 1.0, RESIDUAL_GRID) if grid is None else np.asarray(grid, dtype=float)
    assembler = _Assembler(problem, config)
    psi = eval_basis_vector(config.spec, grid)
    if not problem.stochastic:
        # no path dependence: every member equals the single solve
        a, b = assembler.system(None)
        curve = _solve_system(a, b, config) @ psi
        return EnsembleStats(grid, curve, np.zeros_like(curve), curve, curve.copy(), n_paths, config.seed)
    curves, failed = [], 0
    for i in range(n_paths):
        seed = derive_seed(config.seed, i)
        a, b = assembler.system(sample_solver_path(config, seed))
        try:
            fbar = _solve_system(a, b, replace(config, seed=seed))
        except SolverError as exc:
            log.warning("path %d failed: %s", i, exc)
            failed += 1
            continue
        curves.append(fbar @ psi)
    if failed > MAX_FAILED_FRACTION * n_paths:
        raise EnsembleError(f"{failed} of {n_paths} paths failed")
    curves = np.array(curves)
    return EnsembleStats(
        grid=grid,
        mean=curves.mean(axis=0),
        std=curves.std(axis=0),
        q05=np.quantile(curves, 0.05, axis=0),
        q95=np.quantile(curves, 0.95, axis=0),
        n_paths=n_paths,
        master_seed=config.seed,
        n_failed=failed,
    )


@dataclass(frozen=True)
class ErrorReport:
    grid: np.ndarray
    values: np.ndarray
    squared_integral: float
    """``int_0^1 e(t)**2 dt`` (Gauss quadrature)."""
    l2: float
    """``sqrt`` of the Gauss value."""
    l2_trapezoid: float


def error_function(solution: SpectralSolution, exact: Callable, grid=None, n_nodes: int = 64) -> ErrorReport:
    """``e_m(t) = f(t) - f_m(t)`` on ``grid`` with its squared and square-root norms."""
    grid = np.linspace(0.0, 1.0, RESIDUAL_GRID) if grid is None else np.asarray(grid, dtype=float)
    values = np.asarray(exact(grid), dtype=float) - solution(grid)
    x, w = gauss_quadrature(BasisSpec(0.0, 1.0, 1), n_nodes)
    sq = float(w @ (np.asarray(exact(x), dtype=float) - solution(x)) ** 2)
    trap = float(np.trapezoid(values**2, grid))
    return ErrorReport(grid, values, sq, math.sqrt(sq), math.sqrt(trap))


def kernel_bound(problem: FsideProblem, n_grid: int = 201) -> float:
    """``max |k1| + sigma |k2|`` over a dense grid of the unit square."""
    x = np.linspace(0.0, 1.0, n_grid)
    S, T = np.meshgrid(x, x, indexing="ij")
    total = np.zeros_like(S)
    if problem.k1 is not None:
        total += np.abs(np.broadcast_to(problem.k1(S, T), S.shape))
    if problem.k2 is not None:
        total += problem.sigma * np.abs(np.broadcast_to(problem.k2(S, T), S.shape))
    return float(total.max())


def theoretical_bound(problem: FsideProblem, m: int) -> float:
    """``max(|k1| + |k2|) / (Gamma(alpha) (m + 1)! 2**(2m + 1))``.

    The unknown constant of the a-priori estimate is set to one, so the value
    tracks the rate in ``m`` rather than certifying an absolute error.
    """
    return kernel_bound(problem) / (gamma(problem.alpha) * math.factorial(m + 1) * 2.0 ** (2 * m + 1))
