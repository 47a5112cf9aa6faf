import logging
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from tunnelkit.errors import PreconditionError, StationaryPointError
from tunnelkit.models.model import BaseModel
from tunnelkit.reference.hopf_lax import QuadraticPhaseEvaluator

logger = logging.getLogger(__name__)

MAX_BRACKET_DOUBLINGS = 30


class TimeReversalReport(BaseModel):
    t: float
    epsilon: float
    residual: float
    worst_x: Optional[float]
    xs: List[float]
    residuals: List[float]


def _stationary_point(evaluator: QuadraticPhaseEvaluator, x: float, h: float) -> float:
    two_at = 2.0 * evaluator.diffusion * evaluator.t

    def gap(xi):
        return float(xi - two_at * evaluator.gradient(xi)[0] - x)

    guess = float(x + two_at * evaluator.data.p0(x))
    half_width = 10.0 * h
    for _ in range(MAX_BRACKET_DOUBLINGS):
        lo, hi = guess - half_width, guess + half_width
        g_lo, g_hi = gap(lo), gap(hi)
        if g_lo == 0.0:
            return lo
        if g_hi == 0.0:
            return hi
        if np.sign(g_lo) != np.sign(g_hi):
            return float(brentq(gap, lo, hi, xtol=1e-13))
        half_width *= 2.0
    raise StationaryPointError(f"no stationary point of the backward exponent for x={x!r}")


def _weighted_reconstruction(
    evaluator: QuadraticPhaseEvaluator, x: float, epsilon: float, h: float
) -> float:
    """e^{S0(x)/eps} times the backward-kernel integral, by Laplace's method to O(eps)."""
    two_at = 2.0 * evaluator.diffusion * evaluator.t
    xi = _stationary_point(evaluator, x, h)
    stencil = xi + h * np.arange(-2, 3)
    p = evaluator.gradient(stencil)
    g = evaluator.amplitude(stencil)
    f2 = (p[3] - p[1]) / (2.0 * h) - 1.0 / two_at
    if f2 >= 0:
        raise StationaryPointError(f"backward exponent is not a saddle at xi={xi!r}")
    f3 = (p[3] - 2.0 * p[2] + p[1]) / h**2
    f4 = (p[4] - 2.0 * p[3] + 2.0 * p[1] - p[0]) / (2.0 * h**3)
    g0 = g[2]
    g1 = (g[3] - g[1]) / (2.0 * h)
    g2 = (g[3] - 2.0 * g[2] + g[1]) / h**2
    correction = (
        g2 / (2.0 * f2)
        - g1 * f3 / (2.0 * f2**2)
        - g0 * f4 / (8.0 * f2**2)
        + 5.0 * g0 * f3**2 / (24.0 * f2**3)
    )
    exponent = float(evaluator.action(xi)[0]) - (x - xi) ** 2 / (2.0 * two_at)
    drift = exponent - float(evaluator.data.S0(x))
    return float(
        (g0 + epsilon * correction) / np.sqrt(-two_at * f2) * np.exp(-drift / epsilon)
    )


def time_reversal_check(
    evaluator: QuadraticPhaseEvaluator,
    epsilon: float,
    xs,
    h: float = 1e-3,
) -> TimeReversalReport:
    """Run exp(-S_hat / eps) phi_hat at time t back to t = 0 and compare with the data.

    The backward heat kernel is applied by its stationary point only (direct
    quadrature is ill-posed). The residual is weighted by exp(S0 / eps), so it
    measures the amplitude error directly. Refused once a caustic has formed.
    """
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    t = evaluator.t
    caustic = evaluator.first_caustic_time
    if caustic <= t:
        raise PreconditionError(
            f"a caustic forms at t={caustic:.6g} <= {t:.6g}; "
            "the data cannot be reconstructed through it"
        )
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if t == 0.0:
        residuals = np.zeros_like(xs)
    else:
        phi0 = evaluator.data.phi0(xs) + 0.0 * xs
        residuals = np.array(
            [
                abs(_weighted_reconstruction(evaluator, float(x), epsilon, h) - phi0[i])
                for i, x in enumerate(xs)
            ]
        )
    worst = int(np.argmax(residuals)) if residuals.size else None
    residual = float(residuals[worst]) if worst is not None else 0.0
    logger.debug("time reversal at t=%g, eps=%g: residual %.3g", t, epsilon, residual)
    return TimeReversalReport(
        t=t,
        epsilon=epsilon,
        residual=residual,
        worst_x=float(xs[worst]) if worst is not None else None,
        xs=[float(x) for x in xs],
        residuals=[float(r) for r in residuals],
    )
