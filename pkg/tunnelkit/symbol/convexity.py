from typing import Tuple

import numpy as np

from tunnelkit.models.model import BaseModel
from tunnelkit.symbol.base import BaseHamiltonianSymbol


class ConvexityReport(BaseModel):
    min_hess: float
    certified: bool
    x_min: float
    p_min: float


def check_convexity(
    symbol: BaseHamiltonianSymbol,
    x_window: Tuple[float, float],
    p_window: Tuple[float, float],
    n_samples: int = 51,
    t: float = 0.0,
) -> ConvexityReport:
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2 per axis")
    if not (x_window[0] < x_window[1] and p_window[0] < p_window[1]):
        raise ValueError("convexity windows must be non-degenerate")
    xs = np.linspace(x_window[0], x_window[1], n_samples)
    ps = np.linspace(p_window[0], p_window[1], n_samples)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    hess = np.broadcast_to(symbol.hess_pp(X, P, t), X.shape)
    index = np.unravel_index(np.argmin(hess), hess.shape)
    min_hess = float(hess[index])
    return ConvexityReport(
        min_hess=min_hess,
        certified=min_hess > 0.0,
        x_min=float(X[index]),
        p_min=float(P[index]),
    )
