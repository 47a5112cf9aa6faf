from dataclasses import dataclass, replace
from typing import Iterator, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from tunnelkit.errors import NonPositiveFieldError, PreconditionError
from tunnelkit.hamflow.initial import InitialData


def check_uniform(xgrid: np.ndarray) -> float:
    """Spacing of a uniform, increasing grid with at least three nodes."""
    xgrid = np.asarray(xgrid, dtype=float)
    if xgrid.ndim != 1 or xgrid.size < 3:
        raise PreconditionError("xgrid must be 1-d with at least three nodes")
    steps = np.diff(xgrid)
    dx = float(steps[0])
    if dx <= 0 or np.max(np.abs(steps - dx)) > 1e-8 * dx:
        raise PreconditionError("xgrid must be uniform and increasing")
    return dx


def trapezoid_log_weights(n: int, dx: float) -> np.ndarray:
    weights = np.full(n, np.log(dx))
    weights[[0, -1]] += np.log(0.5)
    return weights


@dataclass(frozen=True, eq=False)
class GridField:
    """u(x, t) >= 0 on a uniform grid, stored as ln u (one row per time)."""

    xgrid: np.ndarray
    tgrid: np.ndarray
    log_u: np.ndarray
    epsilon: float
    # fraction of mass carried outside the grid, when the producer can tell
    mass_leakage: Optional[float] = None

    def __post_init__(self):
        check_uniform(self.xgrid)
        if self.tgrid.ndim != 1 or np.any(np.diff(self.tgrid) <= 0):
            raise PreconditionError("tgrid must be 1-d and increasing")
        if self.log_u.shape != (self.tgrid.size, self.xgrid.size):
            raise PreconditionError(
                f"log_u has shape {self.log_u.shape}, "
                f"expected {(self.tgrid.size, self.xgrid.size)}"
            )
        if np.any(np.isnan(self.log_u)) or np.any(self.log_u == np.inf):
            raise PreconditionError("field values must be finite")
        if self.epsilon <= 0:
            raise PreconditionError("epsilon must be positive")

    @classmethod
    def from_values(cls, xgrid, tgrid, values, epsilon: float) -> "GridField":
        values = np.atleast_2d(np.asarray(values, dtype=float))
        if np.any(values < 0) or np.any(np.isnan(values)):
            raise NonPositiveFieldError("u must be nonnegative")
        with np.errstate(divide="ignore"):
            log_u = np.log(values)
        return cls(
            xgrid=np.asarray(xgrid, dtype=float),
            tgrid=np.atleast_1d(np.asarray(tgrid, dtype=float)),
            log_u=log_u,
            epsilon=epsilon,
        )

    @classmethod
    def from_initial_data(
        cls, data: InitialData, epsilon: float, xgrid, t0: float = 0.0
    ) -> "GridField":
        """u0 = phi0 exp(-S0 / epsilon), built in log form so it never overflows."""
        xgrid = np.asarray(xgrid, dtype=float)
        phi0 = np.asarray(data.phi0(xgrid), dtype=float) + 0.0 * xgrid
        if np.any(phi0 < 0):
            raise NonPositiveFieldError("initial amplitude must be nonnegative")
        with np.errstate(divide="ignore"):
            log_u = np.log(phi0) - np.asarray(data.S0(xgrid), dtype=float) / epsilon
        return cls(
            xgrid=xgrid,
            tgrid=np.array([float(t0)]),
            log_u=log_u[None, :],
            epsilon=epsilon,
        )

    @property
    def dx(self) -> float:
        return float(self.xgrid[1] - self.xgrid[0])

    @property
    def values(self) -> np.ndarray:
        return np.exp(self.log_u)

    @property
    def t(self) -> float:
        return float(self.tgrid[-1])

    def index(self, t: float) -> int:
        k = int(np.argmin(np.abs(self.tgrid - t)))
        if not np.isclose(self.tgrid[k], t, rtol=0.0, atol=1e-12):
            raise PreconditionError(f"t={t} is not on the field's time grid")
        return k

    def slice(self, k: int = -1) -> "GridField":
        k = range(self.tgrid.size)[k]
        return replace(
            self,
            tgrid=self.tgrid[k : k + 1],
            log_u=self.log_u[k : k + 1],
        )

    def at(self, t: float) -> "GridField":
        return self.slice(self.index(t))

    def log_mass(self) -> np.ndarray:
        weights = trapezoid_log_weights(self.xgrid.size, self.dx)
        return logsumexp(self.log_u + weights[None, :], axis=1)

    def mass(self) -> np.ndarray:
        return np.exp(self.log_mass())

    def sample_log(self, xs, k: int = -1) -> np.ndarray:
        """ln u at arbitrary points of the grid window, linear in ln u."""
        xs = np.asarray(xs, dtype=float)
        if np.any(xs < self.xgrid[0]) or np.any(xs > self.xgrid[-1]):
            raise PreconditionError("sample points must lie inside the grid")
        return np.interp(xs, self.xgrid, self.log_u[k])

    def rows(self) -> Iterator[Tuple[float, float, float]]:
        values = self.values
        for k, t in enumerate(self.tgrid):
            for x, u in zip(self.xgrid, values[k]):
                yield float(t), float(x), float(u)
