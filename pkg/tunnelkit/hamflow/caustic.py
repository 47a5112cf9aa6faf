import logging
from typing import List

import numpy as np
from opentelemetry import trace

from tunnelkit.constants import TOL_CAUSTIC
from tunnelkit.hamflow.fan import TrajectoryFan
from tunnelkit.hamflow.integrator import FlowState, integrate
from tunnelkit.models.model import BaseModel

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class CausticEvent(BaseModel):
    t_star: float
    label_star: float
    x_star: float


def _sign_changes(J_lo: np.ndarray, J_hi: np.ndarray) -> np.ndarray:
    return ((J_lo > 0) & (J_hi <= 0)) | ((J_lo < 0) & (J_hi >= 0))


def _bisect_with_flow(fan: TrajectoryFan, k: int, idx: np.ndarray, tol: float):
    start = fan.state_at(k)
    state = FlowState(*(component[idx] for component in start))
    t_k = fan.tgrid[k]
    lo = np.zeros(idx.size)
    hi = np.full(idx.size, fan.tgrid[k + 1] - t_k)
    sign0 = np.sign(state.J)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        trial = integrate(fan.symbol, state, t_k, t_k + mid, fan.max_step)
        same = np.sign(trial.J) == sign0
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    t_star = t_k + hi
    final = integrate(fan.symbol, state, t_k, t_star, fan.max_step)
    return t_star, final.x


def _bisect_interpolated(fan: TrajectoryFan, k: int, idx: np.ndarray):
    J_lo, J_hi = fan.J[k, idx], fan.J[k + 1, idx]
    weight = np.where(J_lo != J_hi, J_lo / (J_lo - J_hi), 0.0)
    t_star = fan.tgrid[k] + weight * (fan.tgrid[k + 1] - fan.tgrid[k])
    x_star = (1.0 - weight) * fan.x[k, idx] + weight * fan.x[k + 1, idx]
    return t_star, x_star


def detect_caustic(fan: TrajectoryFan, tol_caustic: float = TOL_CAUSTIC) -> List[CausticEvent]:
    """Every sign change of J along each trajectory, earliest first."""
    events: List[CausticEvent] = []
    with tracer.start_as_current_span("hamflow.detect_caustic"):
        for k in range(fan.tgrid.size - 1):
            idx = np.nonzero(_sign_changes(fan.J[k], fan.J[k + 1]))[0]
            if idx.size == 0:
                continue
            if fan.symbol is not None:
                t_star, x_star = _bisect_with_flow(fan, k, idx, tol_caustic)
            else:
                t_star, x_star = _bisect_interpolated(fan, k, idx)
            events.extend(
                CausticEvent(
                    t_star=float(t), label_star=float(fan.labels[i]), x_star=float(x)
                )
                for i, t, x in zip(idx, t_star, x_star)
            )
    events.sort(key=lambda event: (event.t_star, event.label_star))
    if events:
        logger.debug(
            "Found %d caustic events, first at t=%.6f label=%.6f",
            len(events),
            events[0].t_star,
            events[0].label_star,
        )
    return events
