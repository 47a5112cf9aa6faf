from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from tunnelkit.errors import PreconditionError
from tunnelkit.hamflow.fan import TrajectoryFan


@dataclass(frozen=True, eq=False)
class LagrangianCurve:
    """One time slice of the fan, ordered by label.

    ``fields`` holds auxiliary per-label quantities (for example the
    accumulated coefficient integral) that branches interpolate alongside p.
    """

    t: float
    labels: np.ndarray
    x: np.ndarray
    p: np.ndarray
    S: np.ndarray
    J: np.ndarray
    fields: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.labels.size)

    def max_gap(self) -> float:
        return float(np.max(np.abs(np.diff(self.x))))


def _slice_weights(tgrid: np.ndarray, t: float):
    span = 1e-12 * max(1.0, abs(tgrid[-1]))
    if t < tgrid[0] - span or t > tgrid[-1] + span:
        raise PreconditionError(
            f"t={t!r} outside the fan span [{tgrid[0]!r}, {tgrid[-1]!r}]"
        )
    k = int(np.clip(np.searchsorted(tgrid, t, side="right") - 1, 0, tgrid.size - 2))
    w = float(np.clip((t - tgrid[k]) / (tgrid[k + 1] - tgrid[k]), 0.0, 1.0))
    return k, w


def snapshot(
    fan: TrajectoryFan,
    t: float,
    fields: Optional[Dict[str, np.ndarray]] = None,
) -> LagrangianCurve:
    """Curve at time t, linearly interpolated between the fan's output times."""
    k, w = _slice_weights(fan.tgrid, t)

    def at(values: np.ndarray) -> np.ndarray:
        if w == 0.0:
            return values[k].copy()
        if w == 1.0:
            return values[k + 1].copy()
        return (1.0 - w) * values[k] + w * values[k + 1]

    return LagrangianCurve(
        t=float(t),
        labels=fan.labels,
        x=at(fan.x),
        p=at(fan.p),
        S=at(fan.S),
        J=at(fan.J),
        fields={name: at(values) for name, values in (fields or {}).items()},
    )
