import logging
from typing import List, Optional

import numpy as np

from tunnelkit.constants import DEGENERATE_JUMP_TOL
from tunnelkit.continuity.rules import BaseCoefficientRule
from tunnelkit.errors import (
    DegenerateStratumError,
    EnteringConditionError,
    NoIntersectionError,
)
from tunnelkit.models.model import BaseModel
from tunnelkit.symbol.base import BaseHamiltonianSymbol

logger = logging.getLogger(__name__)

ENTERING_TOL = 1e-6


class ShockStratum(BaseModel):
    """A moving point carrying delta-mass e (per unit x at fixed t).

    Lists are indexed by sample; ``flux`` is the jump flux
    [R u] - v [R] with [g] = g_left - g_right.
    """

    id: int
    birth_time: float
    times: List[float] = []
    x: List[float] = []
    velocity: List[float] = []
    e: List[float] = []
    p_left: List[float] = []
    p_right: List[float] = []
    x0_left: List[float] = []
    x0_right: List[float] = []
    flux: List[float] = []
    reaction: List[float] = []
    parents: List[int] = []
    death_time: Optional[float] = None

    def record(
        self,
        t: float,
        x: float,
        velocity: float,
        e: float,
        p_left: float = float("nan"),
        p_right: float = float("nan"),
        flux: float = 0.0,
        reaction: float = 0.0,
        x0_left: float = float("nan"),
        x0_right: float = float("nan"),
    ):
        self.times.append(float(t))
        self.x.append(float(x))
        self.velocity.append(float(velocity))
        self.e.append(float(e))
        self.p_left.append(float(p_left))
        self.p_right.append(float(p_right))
        self.flux.append(float(flux))
        self.reaction.append(float(reaction))
        self.x0_left.append(float(x0_left))
        self.x0_right.append(float(x0_right))

    def truncate(self, t: float):
        keep = sum(1 for s in self.times if s <= t + 1e-12)
        for name in (
            "times",
            "x",
            "velocity",
            "e",
            "p_left",
            "p_right",
            "flux",
            "reaction",
            "x0_left",
            "x0_right",
        ):
            del getattr(self, name)[keep:]
        self.death_time = float(t)

    def amplitude_at(self, t: float) -> float:
        return float(np.interp(t, self.times, self.e))

    def position_at(self, t: float) -> float:
        return float(np.interp(t, self.times, self.x))

    def rows(self):
        for t, x, v, e in zip(self.times, self.x, self.velocity, self.e):
            yield self.id, t, x, v, e


def stratum_velocity(
    symbol: BaseHamiltonianSymbol,
    x: float,
    p_left: float,
    p_right: float,
    t: float = 0.0,
    tol: float = DEGENERATE_JUMP_TOL,
) -> float:
    """Rankine-Hugoniot velocity [H]/[p] at the stratum position."""
    jump = p_left - p_right
    if abs(jump) < tol:
        raise DegenerateStratumError(
            f"momentum jump {jump!r} at x={x!r} is below {tol!r}; the stratum degenerates"
        )
    return float((symbol.eval(x, p_left, t) - symbol.eval(x, p_right, t)) / jump)


def jump_flux(R_left, R_right, u_left, u_right, velocity) -> float:
    return float((R_left * u_left - R_right * u_right) - velocity * (R_left - R_right))


def check_entering(u_left: float, u_right: float, velocity: float, tol: float = ENTERING_TOL):
    if u_left < velocity - tol or u_right > velocity + tol:
        raise EnteringConditionError(
            f"u_left={u_left!r}, v={velocity!r}, u_right={u_right!r}: "
            "trajectories do not enter the stratum"
        )


def advance_amplitude(e: float, flux: float, reaction: float, dt: float) -> float:
    """One classical Runge-Kutta step of de/dt = flux + reaction * e."""

    def rhs(value):
        return flux + reaction * value

    k1 = rhs(e)
    k2 = rhs(e + 0.5 * dt * k1)
    k3 = rhs(e + 0.5 * dt * k2)
    k4 = rhs(e + dt * k3)
    return float(e + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def amplitude_step(
    stratum: ShockStratum,
    R_left: float,
    R_right: float,
    u_left: float,
    u_right: float,
    rule: BaseCoefficientRule,
    dt: float,
    tol: float = ENTERING_TOL,
) -> float:
    """Advance the stratum's latest amplitude by dt with frozen side states."""
    velocity = stratum.velocity[-1]
    check_entering(u_left, u_right, velocity, tol)
    return advance_amplitude(
        stratum.e[-1],
        jump_flux(R_left, R_right, u_left, u_right, velocity),
        rule.singular_rate(velocity),
        dt,
    )


def intersection_time(s1: ShockStratum, s2: ShockStratum, tol: float = 1e-9) -> float:
    lo = max(s1.times[0], s2.times[0])
    hi = min(s1.times[-1], s2.times[-1])
    if lo > hi:
        raise NoIntersectionError(f"strata {s1.id} and {s2.id} never coexist")
    times = np.array(sorted({t for t in s1.times + s2.times if lo <= t <= hi}))
    gap = np.interp(times, s1.times, s1.x) - np.interp(times, s2.times, s2.x)
    touching = np.nonzero(np.abs(gap) <= tol)[0]
    crossing = np.nonzero(np.sign(gap[:-1]) * np.sign(gap[1:]) < 0)[0]
    candidates = []
    if touching.size:
        candidates.append(float(times[touching[0]]))
    if crossing.size:
        i = crossing[0]
        w = gap[i] / (gap[i] - gap[i + 1])
        candidates.append(float(times[i] + w * (times[i + 1] - times[i])))
    if not candidates:
        raise NoIntersectionError(f"paths of strata {s1.id} and {s2.id} do not meet")
    return min(candidates)


def merge_strata(
    s1: ShockStratum,
    s2: ShockStratum,
    symbol: BaseHamiltonianSymbol,
    child_id: Optional[int] = None,
    tol: float = 1e-9,
) -> ShockStratum:
    """Kirchhoff merge: the child starts where the paths meet with e1 + e2.

    The child's side momenta are the outer ones (left of the left parent,
    right of the right parent); both parents are truncated at the merge.
    """
    t_merge = intersection_time(s1, s2, tol)
    start = max(s1.times[0], s2.times[0])
    left, right = (s1, s2) if s1.position_at(start) <= s2.position_at(start) else (s2, s1)
    x = 0.5 * (left.position_at(t_merge) + right.position_at(t_merge))
    e = left.amplitude_at(t_merge) + right.amplitude_at(t_merge)
    p_left = float(np.interp(t_merge, left.times, left.p_left))
    p_right = float(np.interp(t_merge, right.times, right.p_right))
    child = ShockStratum(
        id=max(s1.id, s2.id) + 1 if child_id is None else child_id,
        birth_time=t_merge,
        parents=[left.id, right.id],
    )
    child.record(
        t_merge,
        x,
        stratum_velocity(symbol, x, p_left, p_right, t_merge),
        e,
        p_left=p_left,
        p_right=p_right,
        x0_left=float(np.interp(t_merge, left.times, left.x0_left)),
        x0_right=float(np.interp(t_merge, right.times, right.x0_right)),
    )
    left.truncate(t_merge)
    right.truncate(t_merge)
    logger.debug(
        "Strata %d and %d merge at t=%.6f x=%.6f with e=%.6g", left.id, right.id, t_merge, x, e
    )
    return child
