import logging
from typing import Dict, List, NamedTuple, Tuple

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from tunnelkit.errors import ProperProjectionError
from tunnelkit.manifold.curve import LagrangianCurve

logger = logging.getLogger(__name__)

MAX_BRANCHES = 64


class Candidate(NamedTuple):
    branch_id: int
    S: float
    p: float
    J: float
    x0: float


class BranchValues(NamedTuple):
    covered: np.ndarray
    S: np.ndarray
    p: np.ndarray
    J: np.ndarray
    x0: np.ndarray
    fields: Dict[str, np.ndarray]


class Branch:
    """Single-valued piece of the curve over x.

    S is a cubic Hermite spline with slope p; every other quantity is
    interpolated linearly. Points with repeated x (a stalled run) keep the
    first occurrence.
    """

    def __init__(self, branch_id: int, curve: LagrangianCurve, start: int, stop: int):
        self.branch_id = branch_id
        self.start = start
        self.stop = stop
        idx = np.arange(start, stop + 1)
        x = curve.x[idx]
        self.direction = 1 if x[-1] > x[0] else -1
        order = np.argsort(x, kind="stable")
        xs = x[order]
        keep = np.concatenate([[True], np.diff(xs) > 0])
        order = order[keep]
        self.xs = xs[keep]
        self._p = curve.p[idx][order]
        self._J = curve.J[idx][order]
        self._x0 = curve.labels[idx][order]
        self._fields = {name: values[idx][order] for name, values in curve.fields.items()}
        self._S = CubicHermiteSpline(self.xs, curve.S[idx][order], self._p)

    @property
    def x_min(self) -> float:
        return float(self.xs[0])

    @property
    def x_max(self) -> float:
        return float(self.xs[-1])

    @property
    def label_range(self) -> Tuple[float, float]:
        return float(self._x0.min()), float(self._x0.max())

    def covers(self, xq) -> np.ndarray:
        xq = np.asarray(xq, dtype=float)
        return (xq >= self.x_min) & (xq <= self.x_max)

    def action(self, xq):
        return self._S(xq)

    def momentum(self, xq):
        return np.interp(xq, self.xs, self._p)

    def evaluate(self, xq) -> BranchValues:
        xq = np.asarray(xq, dtype=float)
        covered = self.covers(xq)

        def masked(values):
            return np.where(covered, values, np.nan)

        return BranchValues(
            covered=covered,
            S=masked(self._S(xq)),
            p=masked(np.interp(xq, self.xs, self._p)),
            J=masked(np.interp(xq, self.xs, self._J)),
            x0=masked(np.interp(xq, self.xs, self._x0)),
            fields={
                name: masked(np.interp(xq, self.xs, values))
                for name, values in self._fields.items()
            },
        )


class BranchField:
    def __init__(self, curve: LagrangianCurve, branches: List[Branch]):
        self.curve = curve
        self.branches = branches

    @property
    def t(self) -> float:
        return self.curve.t

    def __len__(self) -> int:
        return len(self.branches)

    def branch(self, branch_id: int) -> Branch:
        return self.branches[branch_id]

    def candidates(self, x: float) -> List[Candidate]:
        found = []
        for branch in self.branches:
            if branch.covers(x):
                values = branch.evaluate(x)
                found.append(
                    Candidate(
                        branch_id=branch.branch_id,
                        S=float(values.S),
                        p=float(values.p),
                        J=float(values.J),
                        x0=float(values.x0),
                    )
                )
        return found


def _monotone_runs(x: np.ndarray) -> List[Tuple[int, int]]:
    signs = np.sign(np.diff(x))
    nonzero = np.nonzero(signs)[0]
    if nonzero.size == 0:
        raise ProperProjectionError("curve collapses onto a single x")
    # stalled steps join the run before them; leading stalls join the first run
    source = np.where(signs != 0, np.arange(signs.size), nonzero[0])
    filled = signs[np.maximum.accumulate(source)]
    breaks = np.nonzero(np.diff(filled))[0] + 1
    starts = np.concatenate([[0], breaks])
    stops = np.concatenate([breaks, [filled.size]])
    return list(zip(starts.tolist(), stops.tolist()))


def branch_decompose(
    curve: LagrangianCurve, max_branches: int = MAX_BRANCHES
) -> BranchField:
    """Split the curve into maximal runs on which x is monotone in the label.

    Consecutive branches share their turning point, which is where J changes
    sign.
    """
    runs = _monotone_runs(curve.x)
    if len(runs) > max_branches:
        raise ProperProjectionError(
            f"{len(runs)} branches at t={curve.t!r}; the projection is not proper "
            "at this resolution"
        )
    branches = [Branch(i, curve, start, stop) for i, (start, stop) in enumerate(runs)]
    if len(branches) > 1:
        logger.debug("t=%.6f: %d branches", curve.t, len(branches))
    return BranchField(curve, branches)
