"""Gamma function and the power-rule for Caputo derivatives of monomials."""

from __future__ import annotations

import math

# alpha within this distance of an integer is treated as that integer
INTEGER_GUARD = 1e-12


def gamma(x: float) -> float:
    """Gamma function with explicit pole and overflow errors.

    Raises
    ------
    ValueError
        If ``x`` is zero or a negative integer.
    OverflowError
        If ``x`` exceeds 171.6 (the float64 range).
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"gamma has a pole at {x}")
    if x > 171.6:
        raise OverflowError(f"gamma({x}) overflows float64")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    """``log|Gamma(x)|`` for positive ``x``."""
    if x <= 0:
        raise ValueError(f"log_gamma expects x > 0, got {x}")
    return math.lgamma(x)


def ceil_order(alpha: float) -> int:
    """Ceiling of a fractional order, snapping near-integers first."""
    nearest = round(alpha)
    if abs(alpha - nearest) <= INTEGER_GUARD:
        return int(nearest)
    return math.ceil(alpha)


def _is_nonneg_integer(mu: float) -> bool:
    return mu >= 0 and abs(mu - round(mu)) <= INTEGER_GUARD


def caputo_monomial(mu: float, alpha: float) -> tuple[float, float]:
    """Caputo derivative of ``t**mu`` as ``(coefficient, exponent)``.

    ``D^alpha t^mu = coefficient * t^exponent``. Integer powers below
    ``ceil(alpha)`` are annihilated and returned as ``(0.0, 0.0)``.
    """
    if mu < 0:
        raise ValueError(f"mu must be non-negative, got {mu}")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if _is_nonneg_integer(mu) and round(mu) < ceil_order(alpha):
        return 0.0, 0.0
    return gamma(mu + 1) / gamma(mu + 1 - alpha), mu - alpha
