from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union

import numpy as np

from tunnelkit.errors import NonPositiveFieldError, PreconditionError
from tunnelkit.reference.grid import GridField


@dataclass(frozen=True, eq=False)
class PhaseField:
    """-eps ln u on the grid of the field it was extracted from."""

    xgrid: np.ndarray
    tgrid: np.ndarray
    phase: np.ndarray
    epsilon: float

    def index(self, t: Optional[float] = None) -> int:
        if t is None:
            return self.tgrid.size - 1
        k = int(np.argmin(np.abs(self.tgrid - t)))
        if not np.isclose(self.tgrid[k], t, rtol=0.0, atol=1e-12):
            raise PreconditionError(f"t={t} is not on the phase field's time grid")
        return k

    def at(self, t: Optional[float] = None) -> np.ndarray:
        return self.phase[self.index(t)]

    def sample(self, xs, t: Optional[float] = None) -> np.ndarray:
        return np.interp(np.asarray(xs, dtype=float), self.xgrid, self.at(t))

    def rows(self) -> Iterator[Tuple[float, float, float]]:
        for k, t in enumerate(self.tgrid):
            for x, value in zip(self.xgrid, self.phase[k]):
                yield float(t), float(x), float(value)


def varadhan_extract(
    u: Union[GridField, np.ndarray],
    epsilon: Optional[float] = None,
    xgrid: Optional[np.ndarray] = None,
    tgrid: Optional[np.ndarray] = None,
) -> PhaseField:
    """-eps ln u per grid point; raw arrays need their xgrid."""
    if isinstance(u, GridField):
        epsilon = u.epsilon if epsilon is None else epsilon
        log_u = u.log_u
        xgrid, tgrid = u.xgrid, u.tgrid
    else:
        values = np.atleast_2d(np.asarray(u, dtype=float))
        if xgrid is None:
            raise PreconditionError("an xgrid is needed to extract from raw values")
        if np.any(~(values > 0)):
            raise NonPositiveFieldError("u must be positive for the Varadhan transform")
        log_u = np.log(values)
        xgrid = np.asarray(xgrid, dtype=float)
        tgrid = np.arange(values.shape[0], dtype=float) if tgrid is None else tgrid
    if epsilon is None or epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    if np.any(~np.isfinite(log_u)):
        raise NonPositiveFieldError("u vanishes on the grid")
    return PhaseField(
        xgrid=np.asarray(xgrid, dtype=float),
        tgrid=np.atleast_1d(np.asarray(tgrid, dtype=float)),
        phase=-epsilon * log_u,
        epsilon=epsilon,
    )


def kink_from_curvature(
    phase: PhaseField,
    t: Optional[float] = None,
    window: Optional[Tuple[float, float]] = None,
) -> float:
    """Grid point of largest |second difference| of the phase, optionally inside a window."""
    row = phase.at(t)
    curvature = np.abs(row[2:] - 2.0 * row[1:-1] + row[:-2])
    x = phase.xgrid[1:-1]
    if window is not None:
        inside = (x >= window[0]) & (x <= window[1])
        if not np.any(inside):
            raise PreconditionError("curvature window holds no interior grid point")
        curvature = np.where(inside, curvature, -np.inf)
    return float(x[int(np.argmax(curvature))])


def leading_term_ratio(
    u: GridField,
    phi: np.ndarray,
    rho_reg: np.ndarray,
    epsilon: float,
    xs: np.ndarray,
    t: Optional[float] = None,
) -> np.ndarray:
    """u exp(phi / eps) / sqrt(rho_reg) at xs; phi and rho_reg are given at xs.

    At regular points this tends to a constant as eps -> 0.
    """
    rho_reg = np.asarray(rho_reg, dtype=float)
    if np.any(~(rho_reg > 0)):
        raise PreconditionError("regular density must be positive at the sample points")
    k = -1 if t is None else u.index(t)
    log_u = u.sample_log(xs, k)
    return np.exp(log_u + np.asarray(phi, dtype=float) / epsilon - 0.5 * np.log(rho_reg))
