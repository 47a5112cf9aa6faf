import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from opentelemetry import trace
from scipy.integrate import cumulative_trapezoid

from tunnelkit.constants import (
    BIRTH_WARMUP_STEPS,
    DEFAULT_PHASE_POINTS,
    SIDE_CELL_WIDTH,
    SIDE_OFFSET_CELLS,
    XTOL,
)
from tunnelkit.continuity.density import (
    RATE_FIELD,
    SideState,
    accumulated_rate,
    resolve_symbol,
    side_state,
)
from tunnelkit.continuity.rules import BaseCoefficientRule
from tunnelkit.continuity.shock import (
    ENTERING_TOL,
    ShockStratum,
    advance_amplitude,
    check_entering,
    jump_flux,
    stratum_velocity,
)
from tunnelkit.errors import DegenerateStratumError
from tunnelkit.hamflow.fan import TrajectoryFan
from tunnelkit.manifold.branches import BranchField, branch_decompose
from tunnelkit.manifold.curve import snapshot
from tunnelkit.manifold.phase import Kink, min_action
from tunnelkit.manifold.strata import link_kinks
from tunnelkit.symbol.base import BaseHamiltonianSymbol
from tunnelkit.symbol.functions import ScalarFunction

tracer = trace.get_tracer(__name__)


@dataclass(frozen=True, eq=False)
class ShockTracking:
    strata: List[ShockStratum]
    times: np.ndarray
    regular_mass: np.ndarray
    singular_mass: np.ndarray

    @property
    def total_mass(self) -> np.ndarray:
        return self.regular_mass + self.singular_mass

    def mass_drift(self) -> float:
        M = self.total_mass
        return float(np.max(np.abs(M - M[0])) / abs(M[0]))

    def stratum(self, stratum_id: int) -> ShockStratum:
        return next(s for s in self.strata if s.id == stratum_id)

    def merge_graph(self) -> Dict[str, list]:
        return {
            "nodes": [
                {
                    "id": s.id,
                    "birth_time": s.birth_time,
                    "death_time": s.death_time,
                    "birth_x": s.x[0] if s.x else None,
                }
                for s in self.strata
            ],
            "edges": [
                {"parent": parent, "child": s.id} for s in self.strata for parent in s.parents
            ],
        }


@dataclass
class _Slice:
    field: BranchField
    kinks: List[Kink]
    cumulative_mass: np.ndarray


class ShockTracker:
    """Follows every stratum of a fan and integrates its delta-amplitude.

    Side states come from the two entering branches, sampled
    ``side_offset`` and ``side_offset + 1`` cells away from the stratum and
    extrapolated linearly onto it. A stratum born from a fold starts with
    the mass already absorbed between its two entering labels and is
    re-initialised that way for ``warmup_steps`` samples; merged strata
    start with the sum of their parents.
    """

    def __init__(
        self,
        symbol: Optional[BaseHamiltonianSymbol],
        rho0: ScalarFunction,
        rule: BaseCoefficientRule,
        side_offset: int = SIDE_OFFSET_CELLS,
        side_cell_width: float = SIDE_CELL_WIDTH,
        warmup_steps: int = BIRTH_WARMUP_STEPS,
        n_points: int = DEFAULT_PHASE_POINTS,
        xtol: float = XTOL,
        entering_tol: float = ENTERING_TOL,
        logger: Optional[logging.Logger] = None,
    ):
        self.symbol = symbol
        self.rho0 = rho0
        self.rule = rule
        self.side_offset = side_offset
        self.side_cell_width = side_cell_width
        self.warmup_steps = warmup_steps
        self.n_points = n_points
        self.xtol = xtol
        self.entering_tol = entering_tol
        self.logger = logger or logging.getLogger(__name__)

    def side_state(self, field: BranchField, kink: Kink) -> SideState:
        return side_state(
            field,
            kink,
            self.rho0,
            self.symbol,
            self.rule,
            offset_cells=self.side_offset,
            cell_width=self.side_cell_width,
        )

    def velocity(self, x: float, p_left: float, p_right: float, t: float) -> float:
        try:
            return stratum_velocity(self.symbol, x, p_left, p_right, t)
        except DegenerateStratumError:
            self.logger.warning(
                "Degenerate stratum at x=%.6f t=%.6f; using the characteristic speed", x, t
            )
            return float(self.symbol.grad_p(x, 0.5 * (p_left + p_right), t))

    def _slices(self, fan: TrajectoryFan) -> List[_Slice]:
        int_a = accumulated_rate(fan, self.rule, self.symbol)
        slices = []
        for k, t in enumerate(fan.tgrid):
            field = branch_decompose(snapshot(fan, float(t), {RATE_FIELD: int_a}))
            kinks: List[Kink] = []
            if len(field) > 1:
                x = field.curve.x
                xgrid = np.linspace(float(x.min()), float(x.max()), self.n_points)
                kinks = min_action(field, xgrid, xtol=self.xtol).kinks
            weights = self.rho0(fan.labels) * np.exp(-int_a[k])
            slices.append(
                _Slice(field, kinks, cumulative_trapezoid(weights, fan.labels, initial=0.0))
            )
        return slices

    def track(self, fan: TrajectoryFan) -> ShockTracking:
        self.symbol = resolve_symbol(fan, self.symbol)
        with tracer.start_as_current_span("continuity.track_strata"):
            slices = self._slices(fan)
            width = float(np.max(fan.x) - np.min(fan.x))
            speed = float(
                np.max(np.abs(np.diff(fan.x, axis=0)) / np.diff(fan.tgrid)[:, None])
            )
            linked = link_kinks(
                [s.kinks for s in slices],
                fan.tgrid,
                max_speed=speed,
                dx=width / (self.n_points - 1),
                symbol=self.symbol,
            )
            index = {float(t): k for k, t in enumerate(fan.tgrid)}
            strata: List[ShockStratum] = []
            for path in linked:
                stratum = ShockStratum(
                    id=path.id,
                    birth_time=path.birth_time,
                    parents=path.parents,
                    death_time=path.death_time,
                )
                parents = [s for s in strata if s.id in path.parents]
                for j, (t, x) in enumerate(zip(path.times, path.x)):
                    piece = slices[index[t]]
                    kink = min(piece.kinks, key=lambda candidate: abs(candidate.x - x))
                    self._advance(stratum, parents, piece, kink, t, j)
                strata.append(stratum)
            regular, singular = self._masses(fan, slices, strata)
        self.logger.debug(
            "Tracked %d strata; final singular mass %.6g", len(strata), singular[-1]
        )
        return ShockTracking(strata, fan.tgrid.copy(), regular, singular)

    def _advance(
        self,
        stratum: ShockStratum,
        parents: List[ShockStratum],
        piece: _Slice,
        kink: Kink,
        t: float,
        j: int,
    ):
        side = self.side_state(piece.field, kink)
        v = self.velocity(kink.x, side.p_left, side.p_right, t)
        flux = jump_flux(side.R_left, side.R_right, side.u_left, side.u_right, v)
        reaction = self.rule.singular_rate(v)
        labels = piece.field.curve.labels
        absorbed = float(
            np.interp(side.x0_right, labels, piece.cumulative_mass)
            - np.interp(side.x0_left, labels, piece.cumulative_mass)
        )
        if j == 0 and parents:
            e = sum(
                advance_amplitude(
                    parent.e[-1], parent.flux[-1], parent.reaction[-1], t - parent.times[-1]
                )
                for parent in parents
            )
        elif j == 0 or (not parents and j < self.warmup_steps):
            e = absorbed
        else:
            e = advance_amplitude(
                stratum.e[-1],
                0.5 * (stratum.flux[-1] + flux),
                0.5 * (stratum.reaction[-1] + reaction),
                t - stratum.times[-1],
            )
        if j >= self.warmup_steps:
            check_entering(side.u_left, side.u_right, v, self.entering_tol)
        stratum.record(
            t,
            kink.x,
            v,
            e,
            p_left=side.p_left,
            p_right=side.p_right,
            flux=flux,
            reaction=reaction,
            x0_left=side.x0_left,
            x0_right=side.x0_right,
        )

    def _masses(self, fan: TrajectoryFan, slices: List[_Slice], strata: List[ShockStratum]):
        """Regular mass in label space (absorbed label intervals removed) and total delta mass."""
        regular = np.array([piece.cumulative_mass[-1] for piece in slices])
        singular = np.zeros(fan.tgrid.size)
        labels = fan.labels
        for stratum in strata:
            for t, e, x0_l, x0_r in zip(
                stratum.times, stratum.e, stratum.x0_left, stratum.x0_right
            ):
                k = int(np.argmin(np.abs(fan.tgrid - t)))
                cumulative = slices[k].cumulative_mass
                regular[k] -= np.interp(x0_r, labels, cumulative) - np.interp(
                    x0_l, labels, cumulative
                )
                singular[k] += e
        return regular, singular


def track_strata(
    fan: TrajectoryFan,
    rho0: ScalarFunction,
    rule: BaseCoefficientRule,
    symbol: Optional[BaseHamiltonianSymbol] = None,
    logger: Optional[logging.Logger] = None,
    **kwargs,
) -> ShockTracking:
    return ShockTracker(symbol, rho0, rule, logger=logger, **kwargs).track(fan)
