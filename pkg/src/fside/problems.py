"""Built-in test equations with known behaviour."""

from __future__ import annotations

import numpy as np

from .solver import FsideProblem
from .special import gamma


def example1(alpha: float = 0.75, sigma: float = 0.0) -> FsideProblem:
    """``D^a f = -t^5 e^t / 5 + 6 t^(3-a) / Gamma(4-a) + int s e^t f ds + sigma int s e^t f dB``.

    With ``sigma = 0`` the exact solution is ``f(t) = t**3``. At ``a = 0.75``
    the forcing reads ``6 t^2.25 / Gamma(3.25)``.
    """
    c = 6.0 / gamma(4.0 - alpha)

    def g(t):
        t = np.asarray(t, dtype=float)
        return -(t**5) * np.exp(t) / 5.0 + c * t ** (3.0 - alpha)

    def kernel(s, t):
        return np.exp(t) * s

    return FsideProblem(
        alpha=alpha,
        g=g,
        k1=kernel,
        k2=kernel,
        sigma=sigma,
        initial_value=0.0,
        exact=(lambda t: np.asarray(t, dtype=float) ** 3) if sigma == 0 else None,
        name="example1",
    )


def example2(alpha: float = 0.75, sigma: float = 1.0) -> FsideProblem:
    """``D^a f = Gamma(2) t^(1-a) / Gamma(3-a) + t^3/3 + int s f ds + sigma int f dB``, ``f(0) = 0``.

    No closed-form solution is known; check it through the residual.
    """
    c = gamma(2.0) / gamma(3.0 - alpha)

    def g(t):
        t = np.asarray(t, dtype=float)
        return c * t ** (1.0 - alpha) + t**3 / 3.0

    return FsideProblem(
        alpha=alpha,
        g=g,
        k1=lambda s, t: s + 0.0 * t,
        k2=lambda s, t: np.ones(np.broadcast(s, t).shape),
        sigma=sigma,
        initial_value=0.0,
        name="example2",
    )


EXAMPLES = {1: example1, 2: example2}
