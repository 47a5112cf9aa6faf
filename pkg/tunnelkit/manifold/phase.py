import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from tunnelkit.constants import DEGENERATE_JUMP_TOL, XTOL
from tunnelkit.errors import CoverageGapError, PreconditionError
from tunnelkit.manifold.branches import BranchField
from tunnelkit.models.model import BaseModel

logger = logging.getLogger(__name__)


class Kink(BaseModel):
    x: float
    winner_left: int
    winner_right: int
    p_left: float
    p_right: float
    S: float


@dataclass(frozen=True, eq=False)
class GlobalPhase:
    """phi(x, t) = min_j S_j(x, t) on a grid, with the winning branch per point."""

    t: float
    x: np.ndarray
    phi: np.ndarray
    winner: np.ndarray
    p: np.ndarray
    J: np.ndarray
    x0: np.ndarray
    kinks: List[Kink]
    field: BranchField
    fields: Dict[str, np.ndarray]
    # winner changes where a branch runs out of labels, not strata
    edges: List[Kink] = dataclass_field(default_factory=list)

    def rows(self):
        for xi, phi, winner, p in zip(self.x, self.phi, self.winner, self.p):
            yield self.t, float(xi), float(phi), int(winner), float(p)


def _gaps(x: np.ndarray, uncovered: np.ndarray) -> List[Tuple[float, float]]:
    edges = np.diff(np.concatenate([[0], uncovered.astype(int), [0]]))
    starts = np.nonzero(edges == 1)[0]
    stops = np.nonzero(edges == -1)[0] - 1
    return [(float(x[a]), float(x[b])) for a, b in zip(starts, stops)]


def _locate_kink(
    field: BranchField, a: int, b: int, lo: float, hi: float, xtol: float
) -> Tuple[float, bool]:
    left, right = field.branch(a), field.branch(b)
    lo_c = max(lo, left.x_min, right.x_min)
    hi_c = min(hi, left.x_max, right.x_max)
    if lo_c < hi_c:

        def gap(x):
            return float(left.action(x) - right.action(x))

        g_lo, g_hi = gap(lo_c), gap(hi_c)
        if g_lo == 0.0:
            return lo_c, True
        if g_hi == 0.0:
            return hi_c, True
        if np.sign(g_lo) != np.sign(g_hi):
            return float(brentq(gap, lo_c, hi_c, xtol=xtol)), True
    # the winner changed because a branch ran out of coverage
    return 0.5 * (lo + hi), False


def _through_fold(field: BranchField, a: int, b: int, lo: float, hi: float) -> bool:
    if abs(a - b) != 1:
        return False
    x_turn = float(field.curve.x[field.branch(min(a, b)).stop])
    return lo <= x_turn <= hi


def min_action(
    field: BranchField,
    xgrid,
    branch_ids: Optional[Sequence[int]] = None,
    xtol: float = XTOL,
    jump_tol: float = DEGENERATE_JUMP_TOL,
) -> GlobalPhase:
    """Select the essential branch at every grid point.

    Ties go to the lowest branch id. A kink is recorded wherever the winner
    changes between neighbouring grid points, refined to xtol on the equal
    action point of the two winners. Passing through the turning point two
    neighbouring branches share, or any change with no momentum jump above
    ``jump_tol``, is a smooth hand-off and records no kink. A change
    with no equal-action point between the two grid points happens where a
    branch runs out of labels; it goes to ``edges`` instead of ``kinks``.
    """
    xgrid = np.asarray(xgrid, dtype=float)
    if xgrid.ndim != 1 or xgrid.size == 0 or np.any(np.diff(xgrid) <= 0):
        raise PreconditionError("xgrid must be a non-empty increasing 1-d array")
    ids = sorted(range(len(field)) if branch_ids is None else set(branch_ids))
    values = [field.branch(i).evaluate(xgrid) for i in ids]
    actions = np.vstack([np.where(v.covered, v.S, np.inf) for v in values])
    uncovered = np.all(np.isinf(actions), axis=0)
    if np.any(uncovered):
        raise CoverageGapError(_gaps(xgrid, uncovered))

    rank = np.argmin(actions, axis=0)
    columns = np.arange(xgrid.size)
    winner = np.asarray(ids)[rank]

    def pick(name: str) -> np.ndarray:
        return np.vstack([getattr(v, name) for v in values])[rank, columns]

    kinks: List[Kink] = []
    edges: List[Kink] = []
    for i in np.nonzero(np.diff(winner))[0]:
        a, b = int(winner[i]), int(winner[i + 1])
        if _through_fold(field, a, b, xgrid[i], xgrid[i + 1]):
            continue
        x_kink, crossed = _locate_kink(field, a, b, xgrid[i], xgrid[i + 1], xtol)
        left, right = field.branch(a), field.branch(b)
        p_left, p_right = float(left.momentum(x_kink)), float(right.momentum(x_kink))
        if abs(p_left - p_right) < jump_tol:
            continue
        (kinks if crossed else edges).append(
            Kink(
                x=x_kink,
                winner_left=a,
                winner_right=b,
                p_left=p_left,
                p_right=p_right,
                S=float(min(left.action(x_kink), right.action(x_kink))),
            )
        )
    if kinks or edges:
        logger.debug(
            "t=%.6f: %d kinks, %d coverage edges", field.t, len(kinks), len(edges)
        )
    return GlobalPhase(
        t=field.t,
        x=xgrid,
        phi=actions[rank, columns],
        winner=winner,
        p=pick("p"),
        J=pick("J"),
        x0=pick("x0"),
        kinks=kinks,
        field=field,
        fields={
            name: np.vstack([v.fields[name] for v in values])[rank, columns]
            for name in field.curve.fields
        },
        edges=edges,
    )
