from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from tunnelkit.errors import PreconditionError, StationaryPointError
from tunnelkit.models.model import BaseModel

CURVATURE_FLOOR = 1e-6


class LaplaceResult(BaseModel):
    """Leading-order and quadrature values of int phi exp(-S / eps) over a window.

    Both values are reported with the common factor exp(-S* / eps) divided
    out (``scaled``) and at true scale; the true-scale values underflow for
    large S* / eps.
    """

    xi_star: float
    S_star: float
    curvature: float
    leading_scaled: float
    quadrature_scaled: float
    leading: float
    quadrature: float
    ratio: Optional[float]


def laplace_quadrature(
    exponent: Callable,
    amplitude: Callable,
    epsilon: float,
    window: Tuple[float, float],
    h: float = 1e-4,
) -> LaplaceResult:
    lo, hi = window
    if not hi > lo:
        raise PreconditionError("window must be an increasing pair")
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")

    def S(xi):
        return float(exponent(xi))

    found = minimize_scalar(S, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    xi_star = float(found.x)
    S_star = S(xi_star)
    margin = 1e-6 * (hi - lo)
    if (
        xi_star - lo <= margin
        or hi - xi_star <= margin
        or S(lo) <= S_star
        or S(hi) <= S_star
    ):
        raise StationaryPointError(
            f"minimum of the exponent sits on the boundary near {xi_star!r}"
        )
    curvature = (S(xi_star + h) - 2.0 * S_star + S(xi_star - h)) / h**2
    if curvature <= CURVATURE_FLOOR:
        raise StationaryPointError(f"degenerate minimum at {xi_star!r}: S'' = {curvature!r}")

    width = np.sqrt(2.0 * np.pi * epsilon / curvature)
    leading_scaled = float(amplitude(xi_star)) * width
    quadrature_scaled, _ = quad(
        lambda xi: float(amplitude(xi)) * np.exp(-(S(xi) - S_star) / epsilon),
        lo,
        hi,
        points=[xi_star],
        limit=200,
        epsabs=0.0,
        epsrel=1e-10,
    )
    scale = np.exp(-S_star / epsilon)
    return LaplaceResult(
        xi_star=xi_star,
        S_star=S_star,
        curvature=curvature,
        leading_scaled=leading_scaled,
        quadrature_scaled=quadrature_scaled,
        leading=leading_scaled * scale,
        quadrature=quadrature_scaled * scale,
        ratio=quadrature_scaled / leading_scaled if leading_scaled != 0.0 else None,
    )
