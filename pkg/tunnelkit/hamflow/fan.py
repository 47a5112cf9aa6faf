import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np
from opentelemetry import trace

from tunnelkit.constants import DEFAULT_STEP_FRACTION
from tunnelkit.errors import (
    IntegrationBlowUpError,
    NonFiniteResultError,
    PreconditionError,
)
from tunnelkit.hamflow.initial import InitialManifold
from tunnelkit.hamflow.integrator import FlowState, integrate
from tunnelkit.symbol.base import BaseHamiltonianSymbol

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


@dataclass(frozen=True, eq=False)
class TrajectoryFan:
    """States per (time, label); every array has shape (len(tgrid), len(labels)).

    ``symbol`` is set when the fan follows plain Hamiltonian dynamics, which
    lets caustic detection re-integrate single trajectories.
    """

    labels: np.ndarray
    tgrid: np.ndarray
    x: np.ndarray
    p: np.ndarray
    S: np.ndarray
    J: np.ndarray
    dpdx0: np.ndarray
    symbol: Optional[BaseHamiltonianSymbol] = None
    max_step: Optional[float] = None

    @property
    def t0(self) -> float:
        return float(self.tgrid[0])

    @property
    def horizon(self) -> float:
        return float(self.tgrid[-1])

    def state_at(self, k: int) -> FlowState:
        return FlowState(self.x[k], self.p[k], self.S[k], self.J[k], self.dpdx0[k])

    def save(self, path: str) -> None:
        np.savez_compressed(
            path,
            labels=self.labels,
            tgrid=self.tgrid,
            x=self.x,
            p=self.p,
            S=self.S,
            J=self.J,
            dpdx0=self.dpdx0,
        )

    @classmethod
    def load(cls, path: str) -> "TrajectoryFan":
        with np.load(path) as data:
            return cls(**{key: data[key] for key in data.files})


def _check_tgrid(tgrid: np.ndarray) -> np.ndarray:
    tgrid = np.asarray(tgrid, dtype=float)
    if tgrid.ndim != 1 or tgrid.size < 2 or np.any(np.diff(tgrid) <= 0):
        raise PreconditionError("tgrid must be strictly increasing with at least two times")
    return tgrid


def default_max_step(tgrid: np.ndarray) -> float:
    return DEFAULT_STEP_FRACTION * float(tgrid[-1] - tgrid[0])


def _first_failing_label(symbol, state, labels, t_from, t_to, max_step) -> int:
    for i in range(labels.size):
        single = FlowState(*(component[i : i + 1] for component in state))
        try:
            if not np.all(integrate(symbol, single, t_from, t_to, max_step).is_finite()):
                return i
        except NonFiniteResultError:
            return i
    return 0


def _step_or_raise(symbol, state, labels, t_from, t_to, max_step) -> FlowState:
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            stepped = integrate(symbol, state, t_from, t_to, max_step)
    except NonFiniteResultError:
        with np.errstate(over="ignore", invalid="ignore"):
            bad = _first_failing_label(symbol, state, labels, t_from, t_to, max_step)
        raise IntegrationBlowUpError(float(labels[bad]), float(t_to))
    finite = stepped.is_finite()
    if not np.all(finite):
        bad = int(np.argmin(finite))
        raise IntegrationBlowUpError(float(labels[bad]), float(t_to))
    return stepped


def evolve_fan(
    symbol: BaseHamiltonianSymbol,
    initial: InitialManifold,
    tgrid: np.ndarray,
    max_step: Optional[float] = None,
) -> TrajectoryFan:
    tgrid = _check_tgrid(tgrid)
    if abs(tgrid[0] - initial.t0) > 1e-12:
        raise PreconditionError("tgrid must start at the initial manifold's time")
    max_step = max_step or default_max_step(tgrid)
    n_t, n_l = tgrid.size, initial.labels.size
    arrays = {name: np.empty((n_t, n_l)) for name in ("x", "p", "S", "J", "dpdx0")}
    state = FlowState(initial.x, initial.p, initial.S, initial.J, initial.dpdx0)
    with tracer.start_as_current_span("hamflow.evolve_fan"):
        for k in range(n_t):
            if k > 0:
                state = _step_or_raise(
                    symbol, state, initial.labels, tgrid[k - 1], tgrid[k], max_step
                )
            for name, value in zip(("x", "p", "S", "J", "dpdx0"), state):
                arrays[name][k] = value
    logger.debug(
        "Evolved %d labels over %d output times (max step %g)", n_l, n_t, max_step
    )
    return TrajectoryFan(
        labels=initial.labels.copy(),
        tgrid=tgrid,
        symbol=symbol,
        max_step=max_step,
        **arrays,
    )


def flow_points(
    symbol: BaseHamiltonianSymbol,
    x: np.ndarray,
    p: np.ndarray,
    S: np.ndarray,
    t_from: float,
    t_to: float,
    max_step: float,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Move phase points along the Hamiltonian flow; t_to < t_from runs backwards."""
    ones = np.ones_like(np.asarray(x, dtype=float))
    state = FlowState(np.asarray(x, dtype=float), np.asarray(p, dtype=float),
                      np.asarray(S, dtype=float), ones, 0.0 * ones)
    state = _step_or_raise(
        symbol, state, np.atleast_1d(np.asarray(x, dtype=float)), t_from, t_to, max_step
    )
    return state.x, state.p, state.S


class JacobianField(NamedTuple):
    variational: np.ndarray
    finite_difference: np.ndarray

    def max_relative_discrepancy(self, floor: float = 1e-12) -> float:
        scale = np.maximum(np.abs(self.variational), floor)
        return float(np.max(np.abs(self.variational - self.finite_difference) / scale))


def jacobian_field(fan: TrajectoryFan) -> JacobianField:
    return JacobianField(
        variational=fan.J,
        finite_difference=np.gradient(fan.x, fan.labels, axis=1),
    )
