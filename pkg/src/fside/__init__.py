"""Shifted Legendre operational-matrix solver for fractional stochastic integro-differential equations."""

from .legendre import (
    BasisSpec,
    Expansion,
    Expansion2D,
    basis_roots,
    eval_basis,
    eval_basis_vector,
    gauss_quadrature,
    phi_block_matrix,
    project,
    project_2d,
)
from .linalg import IllConditionedWarning, SingularMatrixError, kron, solve_linear
from .operational import (
    OpMatrix,
    caputo_matrix,
    derivative_matrix,
    integration_matrix_1d,
    q3_matrix,
    q4_matrix,
    w_matrix,
)
from .problems import EXAMPLES, example1, example2
from .solver import (
    EnsembleError,
    EnsembleStats,
    FsideProblem,
    ResidualWarning,
    SolverConfig,
    SolverError,
    SpectralSolution,
    assemble_system,
    error_function,
    expand_inputs,
    residual,
    solve,
    solve_ensemble,
    theoretical_bound,
)
from .special import caputo_monomial, gamma
from .stochastic import (
    BrownianPath,
    gbm_path,
    ito_sum,
    sample_brownian,
    sample_fbm,
    stochastic_q3,
    uniform_partition,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
