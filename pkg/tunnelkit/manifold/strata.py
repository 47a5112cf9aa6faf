import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

import numpy as np
from opentelemetry import trace

from tunnelkit.constants import DEFAULT_PHASE_POINTS, XTOL
from tunnelkit.hamflow.fan import TrajectoryFan
from tunnelkit.manifold.branches import branch_decompose
from tunnelkit.manifold.curve import snapshot
from tunnelkit.manifold.phase import Kink, min_action
from tunnelkit.models.model import BaseModel

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class KinkTrajectory(BaseModel):
    id: int
    times: List[float] = []
    x: List[float] = []
    p_left: List[float] = []
    p_right: List[float] = []
    parents: List[int] = []
    birth_time: float
    death_time: Optional[float] = None

    @property
    def birth_x(self) -> float:
        return self.x[0]

    def append(self, t: float, kink: Kink):
        self.times.append(t)
        self.x.append(kink.x)
        self.p_left.append(kink.p_left)
        self.p_right.append(kink.p_right)

    def predict(self, t: float, symbol=None) -> float:
        """Position at t from the Rankine-Hugoniot velocity, or the last finite difference."""
        if len(self.times) == 0:
            raise ValueError("empty kink trajectory")
        x, t_last = self.x[-1], self.times[-1]
        pl, pr = self.p_left[-1], self.p_right[-1]
        if symbol is not None and abs(pl - pr) > 1e-12:
            velocity = float(
                (symbol.eval(x, pl, t_last) - symbol.eval(x, pr, t_last)) / (pl - pr)
            )
        elif len(self.times) > 1:
            velocity = (self.x[-1] - self.x[-2]) / (self.times[-1] - self.times[-2])
        else:
            velocity = 0.0
        return x + velocity * (t - t_last)


def slice_kinks(fan: TrajectoryFan, t: float, n_points: int, xtol: float) -> List[Kink]:
    field = branch_decompose(snapshot(fan, t))
    if len(field) == 1:
        return []
    x = field.curve.x
    xgrid = np.linspace(float(x.min()), float(x.max()), n_points)
    return min_action(field, xgrid, xtol=xtol).kinks


def _max_speed(fan: TrajectoryFan) -> float:
    return float(np.max(np.abs(np.diff(fan.x, axis=0)) / np.diff(fan.tgrid)[:, None]))


def link_kinks(
    per_slice: List[List[Kink]],
    tgrid: np.ndarray,
    max_speed: float,
    dx: float,
    symbol=None,
) -> List[KinkTrajectory]:
    """Chain per-slice kinks into strata by nearest-neighbour continuation.

    Two strata continuing into the same kink end there and start a merged
    child; kinks nobody continues into start new strata.
    """
    strata: List[KinkTrajectory] = []
    active: List[KinkTrajectory] = []
    for k, kinks in enumerate(per_slice):
        t = float(tgrid[k])
        dt = float(tgrid[k] - tgrid[k - 1]) if k > 0 else 0.0
        reach = 2.0 * max_speed * dt + 10.0 * dx
        claims: Dict[int, List[KinkTrajectory]] = {}
        for stratum in active:
            if not kinks:
                break
            predicted = stratum.predict(t, symbol)
            distance = np.abs(np.array([kink.x for kink in kinks]) - predicted)
            j = int(np.argmin(distance))
            if distance[j] <= reach:
                claims.setdefault(j, []).append(stratum)
        next_active: List[KinkTrajectory] = []
        claimed_ids = {s.id for claimed in claims.values() for s in claimed}
        for stratum in active:
            if stratum.id not in claimed_ids:
                stratum.death_time = float(tgrid[k - 1])
        for j, kink in enumerate(kinks):
            claimed = claims.get(j, [])
            if len(claimed) == 1:
                claimed[0].append(t, kink)
                next_active.append(claimed[0])
                continue
            for parent in claimed:
                parent.death_time = t
            child = KinkTrajectory(
                id=len(strata), birth_time=t, parents=[parent.id for parent in claimed]
            )
            child.append(t, kink)
            strata.append(child)
            next_active.append(child)
            if claimed:
                logger.debug(
                    "t=%.6f: strata %s merge into %d at x=%.6f",
                    t,
                    child.parents,
                    child.id,
                    kink.x,
                )
            else:
                logger.debug("t=%.6f: stratum %d born at x=%.6f", t, child.id, kink.x)
        active = next_active
    return strata


def singular_support(
    fan: TrajectoryFan,
    tgrid=None,
    xtol: float = XTOL,
    n_points: int = DEFAULT_PHASE_POINTS,
    max_workers: Optional[int] = None,
) -> List[KinkTrajectory]:
    """Kink trajectories of the global phase over ``tgrid`` (the fan's times by default)."""
    tgrid = fan.tgrid if tgrid is None else np.asarray(tgrid, dtype=float)
    with tracer.start_as_current_span("manifold.singular_support"):
        if max_workers:
            with ThreadPoolExecutor(max_workers=max_workers) as executor:
                per_slice = list(
                    executor.map(lambda t: slice_kinks(fan, t, n_points, xtol), tgrid)
                )
        else:
            per_slice = [slice_kinks(fan, t, n_points, xtol) for t in tgrid]
        width = float(np.max(fan.x) - np.min(fan.x))
        strata = link_kinks(
            per_slice,
            tgrid,
            max_speed=_max_speed(fan),
            dx=width / (n_points - 1),
            symbol=fan.symbol,
        )
    logger.debug("Tracked %d strata over %d slices", len(strata), tgrid.size)
    return strata
