"""Regular part R of a generalized delta-shock solution.

R is carried along characteristics by the Cauchy formula
R = rho0(x0) / J * exp(-int a dt), evaluated on the essential (min-action)
branch. Strata positions only decide where R is cut; their velocities never
enter.
"""
import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from tunnelkit.constants import (
    DEFAULT_PHASE_POINTS,
    JACOBIAN_FLOOR,
    SIDE_CELL_WIDTH,
    SIDE_OFFSET_CELLS,
)
from tunnelkit.continuity.rules import BaseCoefficientRule
from tunnelkit.errors import CrossingTrajectoriesError, PreconditionError, StratumTubeError
from tunnelkit.hamflow.fan import TrajectoryFan
from tunnelkit.manifold.branches import Branch, BranchField, branch_decompose
from tunnelkit.manifold.curve import snapshot
from tunnelkit.manifold.phase import Kink, min_action
from tunnelkit.symbol.base import BaseHamiltonianSymbol
from tunnelkit.symbol.functions import ScalarFunction

logger = logging.getLogger(__name__)

RATE_FIELD = "int_a"


class SideState(NamedTuple):
    """One-sided limits at a kink; left means smaller x."""

    x: float
    R_left: float
    R_right: float
    u_left: float
    u_right: float
    a_left: float
    a_right: float
    p_left: float
    p_right: float
    x0_left: float
    x0_right: float


@dataclass(frozen=True, eq=False)
class RegularDensity:
    tgrid: np.ndarray
    x: np.ndarray
    R: np.ndarray
    u: np.ndarray
    a: np.ndarray
    covered: np.ndarray
    tube: np.ndarray
    sides: List[List[SideState]]
    tube_width: float = 0.0

    def slice_index(self, t: float) -> int:
        k = int(np.argmin(np.abs(self.tgrid - t)))
        if not np.isclose(self.tgrid[k], t, rtol=0.0, atol=1e-12):
            raise PreconditionError(f"t={t!r} is not one of the density's times")
        return k

    def at(self, x: float, t: float) -> float:
        """R at a point of a stored slice, linear in x between grid points."""
        k = self.slice_index(t)
        for side in self.sides[k]:
            if abs(x - side.x) <= self.tube_width:
                raise StratumTubeError(
                    f"({x!r}, {t!r}) lies in the tube of the stratum at x={side.x!r}"
                )
        valid = np.isfinite(self.R[k])
        kinks = [side.x for side in self.sides[k]]
        left = max([k_x for k_x in kinks if k_x < x], default=-np.inf)
        right = min([k_x for k_x in kinks if k_x > x], default=np.inf)
        valid &= (self.x > left) & (self.x < right)
        if not np.any(valid) or x < self.x[valid][0] or x > self.x[valid][-1]:
            raise PreconditionError(f"x={x!r} is outside the resolved part of slice t={t!r}")
        return float(np.interp(x, self.x[valid], self.R[k][valid]))

    def mass(self) -> np.ndarray:
        return np.array(
            [
                integrate_across_kinks(
                    self.x,
                    self.R[k],
                    [side.x for side in self.sides[k]],
                    [side.R_left for side in self.sides[k]],
                    [side.R_right for side in self.sides[k]],
                )
                for k in range(self.tgrid.size)
            ]
        )

    def rows(self):
        for k, t in enumerate(self.tgrid):
            for x, R in zip(self.x, self.R[k]):
                yield float(t), float(x), float(R)


def integrate_across_kinks(
    x: np.ndarray,
    g: np.ndarray,
    kink_x: Sequence[float],
    g_left: Sequence[float],
    g_right: Sequence[float],
) -> float:
    """Trapezoid of g over x, split at the kinks and closed with one-sided limits.

    Non-finite entries of g (tube and uncovered points) are skipped.
    """
    order = np.argsort(kink_x)
    kinks = np.asarray(kink_x, dtype=float)[order]
    lefts = np.asarray(g_left, dtype=float)[order]
    rights = np.asarray(g_right, dtype=float)[order]
    edges = np.concatenate([[-np.inf], kinks, [np.inf]])
    valid = np.isfinite(g)
    total = 0.0
    for i in range(edges.size - 1):
        sel = valid & (x > edges[i]) & (x < edges[i + 1])
        xs, gs = x[sel], g[sel]
        if i > 0:
            xs, gs = np.concatenate([[edges[i]], xs]), np.concatenate([[rights[i - 1]], gs])
        if i < kinks.size:
            xs, gs = np.concatenate([xs, [edges[i + 1]]]), np.concatenate([gs, [lefts[i]]])
        if xs.size >= 2:
            total += float(trapezoid(gs, xs))
    return total


def accumulated_rate(
    fan: TrajectoryFan, rule: BaseCoefficientRule, symbol: BaseHamiltonianSymbol
) -> np.ndarray:
    """int_0^t a dt' along every trajectory, shape (len(tgrid), len(labels))."""
    rates = np.vstack(
        [rule.rate(symbol, fan.x[k], fan.p[k], fan.tgrid[k]) for k in range(fan.tgrid.size)]
    )
    return cumulative_trapezoid(rates, fan.tgrid, axis=0, initial=0.0)


def branch_density(
    branch: Branch,
    xq,
    rho0: ScalarFunction,
    symbol: BaseHamiltonianSymbol,
    rule: BaseCoefficientRule,
    t: float,
):
    """(R, u, a, p, x0) of one branch at query points; NaN where the branch does not reach."""
    values = branch.evaluate(xq)
    covered = values.covered
    x = np.where(covered, np.asarray(xq, dtype=float), branch.x_min)
    p = np.where(covered, values.p, 0.0)
    x0 = np.where(covered, values.x0, branch.label_range[0])
    R = rho0(x0) / np.where(covered, values.J, 1.0) * np.exp(
        -np.where(covered, values.fields[RATE_FIELD], 0.0)
    )

    def masked(v):
        return np.where(covered, v, np.nan)

    return (
        masked(R),
        masked(symbol.grad_p(x, p, t)),
        masked(rule.rate(symbol, x, p, t)),
        values.p,
        values.x0,
    )


def _one_side(
    branch: Branch,
    x: float,
    sign: float,
    rho0: ScalarFunction,
    symbol: BaseHamiltonianSymbol,
    rule: BaseCoefficientRule,
    t: float,
    offset_cells: int,
    cell_width: float,
):
    near = x + sign * offset_cells * cell_width
    far = x + sign * (offset_cells + 1) * cell_width
    anchor = float(np.clip(x, branch.x_min, branch.x_max))
    R, u, a, _, x0 = branch_density(
        branch, np.array([anchor, near, far]), rho0, symbol, rule, t
    )
    if np.all(np.isfinite(R[1:])) and np.all(np.isfinite(u[1:])):
        ratio = offset_cells + 1.0
        return (
            float(ratio * R[1] - (ratio - 1.0) * R[2]),
            float(ratio * u[1] - (ratio - 1.0) * u[2]),
            float(ratio * a[1] - (ratio - 1.0) * a[2]),
            float(x0[0]),
        )
    return float(R[0]), float(u[0]), float(a[0]), float(x0[0])


def side_state(
    field: BranchField,
    kink: Kink,
    rho0: ScalarFunction,
    symbol: BaseHamiltonianSymbol,
    rule: BaseCoefficientRule,
    offset_cells: int = SIDE_OFFSET_CELLS,
    cell_width: float = SIDE_CELL_WIDTH,
) -> SideState:
    """One-sided limits at a kink.

    Each entering branch is sampled ``offset_cells`` and ``offset_cells + 1``
    cells away from the kink and extrapolated linearly onto it; when those
    samples leave the branch, its point nearest the kink is used instead.
    Momenta are the kink's own.
    """
    sides = [
        _one_side(
            field.branch(branch_id),
            kink.x,
            sign,
            rho0,
            symbol,
            rule,
            field.t,
            offset_cells,
            cell_width,
        )
        for branch_id, sign in ((kink.winner_left, -1.0), (kink.winner_right, 1.0))
    ]
    (R_l, u_l, a_l, x0_l), (R_r, u_r, a_r, x0_r) = sides
    return SideState(
        kink.x, R_l, R_r, u_l, u_r, a_l, a_r, kink.p_left, kink.p_right, x0_l, x0_r
    )


def resolve_symbol(fan: TrajectoryFan, symbol: Optional[BaseHamiltonianSymbol]):
    symbol = symbol or fan.symbol
    if symbol is None:
        raise PreconditionError("fan carries no symbol; pass one explicitly")
    return symbol


def stratum_position(stratum, t: float) -> Optional[float]:
    """Position of a stratum (anything with ``times`` and ``x``) at t, if alive."""
    times = np.asarray(stratum.times, dtype=float)
    if times.size == 0 or t < times[0] - 1e-12 or t > times[-1] + 1e-12:
        return None
    return float(np.interp(t, times, stratum.x))


def regular_density(
    fan: TrajectoryFan,
    rho0: ScalarFunction,
    rule: BaseCoefficientRule,
    strata: Optional[Sequence] = None,
    xgrid=None,
    symbol: Optional[BaseHamiltonianSymbol] = None,
    tube_width: float = 0.0,
    jacobian_floor: float = JACOBIAN_FLOOR,
) -> RegularDensity:
    """Cauchy-formula density on ``xgrid`` at every fan time.

    Every kink of the global phase must belong to one of ``strata``;
    otherwise trajectories cross outside a stratum and
    CrossingTrajectoriesError names the first such point. The same error is
    raised where the winning Jacobian is negative beyond ``jacobian_floor``
    times its largest magnitude on the slice; points within that floor are
    focal points of a stratum being born and carry no regular value.
    """
    symbol = resolve_symbol(fan, symbol)
    if xgrid is None:
        xgrid = np.linspace(float(fan.x.min()), float(fan.x.max()), DEFAULT_PHASE_POINTS)
    xgrid = np.asarray(xgrid, dtype=float)
    dx = float(np.min(np.diff(xgrid))) if xgrid.size > 1 else 0.0
    match_tol = max(tube_width, 10.0 * dx)
    int_a = accumulated_rate(fan, rule, symbol)
    n_t = fan.tgrid.size
    shape = (n_t, xgrid.size)
    R, u, a = np.full(shape, np.nan), np.full(shape, np.nan), np.full(shape, np.nan)
    covered = np.zeros(shape, dtype=bool)
    tube = np.zeros(shape, dtype=bool)
    sides: List[List[SideState]] = []
    for k, t in enumerate(fan.tgrid):
        t = float(t)
        field = branch_decompose(snapshot(fan, t, {RATE_FIELD: int_a}))
        x = field.curve.x
        covered[k] = (xgrid >= x.min()) & (xgrid <= x.max())
        xs = xgrid[covered[k]]
        phase = min_action(field, xs)
        positions = [
            position
            for position in (stratum_position(s, t) for s in (strata or []))
            if position is not None
        ]
        for kink in phase.kinks:
            if not any(abs(kink.x - position) <= match_tol for position in positions):
                raise CrossingTrajectoriesError(kink.x, t)
        floor = jacobian_floor * float(np.max(np.abs(phase.J)))
        if np.any(phase.J < -floor):
            raise CrossingTrajectoriesError(float(xs[np.argmax(phase.J < -floor)]), t)
        focal = np.abs(phase.J) <= floor
        J = np.where(focal, 1.0, phase.J)
        R_k = rho0(phase.x0) / J * np.exp(-phase.fields[RATE_FIELD])
        R_k = np.where(focal, np.nan, R_k)
        in_tube = np.zeros(xs.size, dtype=bool)
        for kink in phase.kinks:
            in_tube |= np.abs(xs - kink.x) <= tube_width
        R_k = np.where(in_tube, np.nan, R_k)
        R[k, covered[k]] = R_k
        u[k, covered[k]] = symbol.grad_p(xs, phase.p, t)
        a[k, covered[k]] = rule.rate(symbol, xs, phase.p, t)
        tube[k, covered[k]] = in_tube
        sides.append([side_state(field, kink, rho0, symbol, rule) for kink in phase.kinks])
    logger.debug(
        "Regular density on %d points x %d times, %d slices with strata",
        xgrid.size,
        n_t,
        sum(1 for s in sides if s),
    )
    return RegularDensity(
        tgrid=fan.tgrid.copy(),
        x=xgrid,
        R=R,
        u=u,
        a=a,
        covered=covered,
        tube=tube,
        sides=sides,
        tube_width=tube_width,
    )
