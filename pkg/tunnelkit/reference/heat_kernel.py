import logging
from typing import Optional

import numpy as np
from opentelemetry import trace
from scipy.special import log_ndtr, logsumexp

from tunnelkit.constants import MASS_LEAKAGE_TOL
from tunnelkit.errors import PreconditionError
from tunnelkit.reference.grid import GridField, trapezoid_log_weights

tracer = trace.get_tracer(__name__)

ROW_CHUNK = 512


def _log_leaked_fraction(xi: np.ndarray, lo: float, hi: float, scale: float) -> np.ndarray:
    # Gaussian tails of the kernel centred at xi beyond either end of the grid
    return np.logaddexp(log_ndtr((lo - xi) / scale), log_ndtr((xi - hi) / scale))


def heat_kernel_convolve(
    u0: GridField,
    t: float,
    epsilon: float,
    diffusion: float = 1.0,
    logger: Optional[logging.Logger] = None,
) -> GridField:
    """u(x, t0 + t) = int G(x - xi) u0(xi) dxi for u_t = eps A u_xx.

    G = (4 pi eps A t)^(-1/2) exp(-(x - xi)^2 / (4 eps A t)), integrated with the
    trapezoid rule on the grid of u0 (its last row). The fraction of mass the
    kernel carries past the grid ends is reported as ``mass_leakage``.
    """
    logger = logger or logging.getLogger(__name__)
    if t <= 0:
        raise PreconditionError("convolution time must be positive")
    if diffusion <= 0:
        raise PreconditionError("diffusion coefficient must be positive")
    spread = 2.0 * epsilon * diffusion * t
    x = u0.xgrid
    if np.sqrt(spread) < u0.dx:
        raise PreconditionError(
            f"kernel width {np.sqrt(spread):.3g} is below the grid spacing {u0.dx:.3g}"
        )
    source = u0.log_u[-1] + trapezoid_log_weights(x.size, u0.dx)
    log_norm = -0.5 * np.log(2.0 * np.pi * spread)
    log_u = np.empty(x.size)
    with tracer.start_as_current_span("reference.heat_kernel_convolve") as span:
        span.set_attribute("nodes", int(x.size))
        for start in range(0, x.size, ROW_CHUNK):
            rows = x[start : start + ROW_CHUNK]
            exponent = -((rows[:, None] - x[None, :]) ** 2) / (2.0 * spread)
            log_u[start : start + ROW_CHUNK] = log_norm + logsumexp(
                exponent + source[None, :], axis=1
            )
        leaked = logsumexp(
            source + _log_leaked_fraction(x, x[0], x[-1], np.sqrt(spread))
        ) - logsumexp(source)
    leakage = float(np.exp(leaked))
    if leakage > MASS_LEAKAGE_TOL:
        logger.warning(
            "heat kernel leaks %.3g of the mass past the grid at t=%g; widen the grid",
            leakage,
            t,
        )
    return GridField(
        xgrid=x.copy(),
        tgrid=np.array([u0.t + t]),
        log_u=log_u[None, :],
        epsilon=epsilon,
        mass_leakage=leakage,
    )
