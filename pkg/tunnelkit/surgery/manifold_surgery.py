"""Vertical-segment surgery of a once-folded Lagrangian curve.

At t1* = t* + beta the two essential outer branches are cut at their
equal-action point x1* and joined by a vertical segment {x1*} x [p_right,
p_left]; the middle branch and the shadowed ends of the outer branches are
dropped. The result is flowed back by t1 so that the segment becomes a
regular graph piece between the angle points a1 < a2.
"""
import dataclasses
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from tunnelkit.constants import DEFAULT_BETA, MAX_BACKFLOW_HALVINGS, XTOL
from tunnelkit.errors import (
    MultipleFoldsError,
    NoFoldError,
    PreconditionError,
    RefoldError,
)
from tunnelkit.hamflow.caustic import detect_caustic
from tunnelkit.hamflow.fan import TrajectoryFan, flow_points
from tunnelkit.manifold.branches import BranchField, branch_decompose
from tunnelkit.manifold.curve import LagrangianCurve, snapshot
from tunnelkit.manifold.phase import min_action
from tunnelkit.symbol.base import BaseHamiltonianSymbol

logger = logging.getLogger(__name__)

SOURCE_LABEL = "source_label"


@dataclass(frozen=True, eq=False)
class SurgeredManifold:
    base: LagrangianCurve
    surgered: LagrangianCurve
    backflowed: LagrangianCurve
    x1_star: float
    p_left: float
    p_right: float
    label_left: float
    label_right: float
    delta_S: float
    a1: float
    a2: float
    p_a1: float
    p_a2: float
    t1: float
    t_star: Optional[float] = None
    x_star: Optional[float] = None

    @property
    def t1_star(self) -> float:
        return self.base.t

    @property
    def t0(self) -> float:
        return self.backflowed.t

    @property
    def identity(self) -> bool:
        return self.label_left == self.label_right

    def window(self) -> np.ndarray:
        """Labels of the back-flowed curve strictly between the angle points."""
        labels = self.backflowed.labels
        return (labels > self.a1) & (labels < self.a2)

    def report(self) -> dict:
        return {
            "t_star": self.t_star,
            "x_star": self.x_star,
            "t1_star": self.t1_star,
            "t1": self.t1,
            "a1": self.a1,
            "a2": self.a2,
            "x1_star": self.x1_star,
            "delta_S": self.delta_S,
        }


def _regraph(curve: LagrangianCurve, t: float, x, p, S, source_labels) -> LagrangianCurve:
    """The curve re-labelled by position, which requires x to be strictly increasing."""
    return LagrangianCurve(
        t=t,
        labels=np.asarray(x, dtype=float),
        x=np.asarray(x, dtype=float),
        p=np.asarray(p, dtype=float),
        S=np.asarray(S, dtype=float),
        J=np.ones_like(np.asarray(x, dtype=float)),
        fields={SOURCE_LABEL: np.asarray(source_labels, dtype=float)},
    )


def _identity(curve: LagrangianCurve, tol: float) -> SurgeredManifold:
    i = int(np.argmin(np.abs(curve.J)))
    if abs(curve.J[i]) > tol:
        raise NoFoldError(f"no fold on the curve at t={curve.t!r}: min |J| = {abs(curve.J[i])!r}")
    x1 = float(curve.x[i])
    logger.debug("Zero-width fold at x=%.6f t=%.6f; surgery is the identity", x1, curve.t)
    return SurgeredManifold(
        base=curve,
        surgered=curve,
        backflowed=_regraph(curve, curve.t, curve.x, curve.p, curve.S, curve.labels),
        x1_star=x1,
        p_left=float(curve.p[i]),
        p_right=float(curve.p[i]),
        label_left=float(curve.labels[i]),
        label_right=float(curve.labels[i]),
        delta_S=0.0,
        a1=x1,
        a2=x1,
        p_a1=float(curve.p[i]),
        p_a2=float(curve.p[i]),
        t1=0.0,
    )


def _cut_and_join(curve: LagrangianCurve, field: BranchField, tol: float):
    directions = [field.branch(i).direction for i in range(len(field))]
    if directions != [1, -1, 1]:
        raise NoFoldError(f"branch directions {directions} do not form a fold")
    left, right = field.branch(0), field.branch(2)
    lo, hi = max(left.x_min, right.x_min), min(left.x_max, right.x_max)
    if not lo < hi:
        raise NoFoldError("the outer branches do not overlap")
    xgrid = np.linspace(lo, hi, 401)
    kinks = min_action(field, xgrid, xtol=tol).kinks
    if len(kinks) != 1 or (kinks[0].winner_left, kinks[0].winner_right) != (0, 2):
        raise NoFoldError(
            f"expected one kink between the outer branches, found {len(kinks)}"
        )
    x1 = kinks[0].x
    on_left, on_right = left.evaluate([x1]), right.evaluate([x1])
    S_left, S_right = float(on_left.S[0]), float(on_right.S[0])
    label_left, label_right = float(on_left.x0[0]), float(on_right.x0[0])
    p_left, p_right = float(on_left.p[0]), float(on_right.p[0])

    spacing = float(np.min(np.diff(curve.labels)))
    n_seg = max(2, int(np.ceil((label_right - label_left) / spacing)) + 1)
    seg_labels = np.linspace(label_left, label_right, n_seg)
    S_star = 0.5 * (S_left + S_right)
    keep_left = curve.labels < label_left
    keep_right = curve.labels > label_right

    def join(values, segment):
        return np.concatenate([values[keep_left], segment, values[keep_right]])

    surgered = LagrangianCurve(
        t=curve.t,
        labels=join(curve.labels, seg_labels),
        x=join(curve.x, np.full(n_seg, x1)),
        p=join(curve.p, np.linspace(p_left, p_right, n_seg)),
        S=join(curve.S, np.full(n_seg, S_star)),
        J=join(curve.J, np.zeros(n_seg)),
    )
    return surgered, x1, p_left, p_right, label_left, label_right, abs(S_left - S_right)


def manifold_surgery(
    curve: LagrangianCurve,
    symbol: BaseHamiltonianSymbol,
    field: Optional[BranchField] = None,
    beta: float = DEFAULT_BETA,
    t1: Optional[float] = None,
    tol: float = XTOL,
    max_step: Optional[float] = None,
) -> SurgeredManifold:
    """Cut, join and flow back a curve with exactly one fold.

    ``t1`` defaults to beta / 2 and is halved while the back-flowed curve
    fails to be a graph over x; an explicit ``t1`` is used as given.
    """
    if symbol.time_dependent:
        raise PreconditionError("surgery back-flow needs a time-independent symbol")
    field = field or branch_decompose(curve)
    if len(field) == 1:
        return _identity(curve, tol)
    if len(field) > 3:
        raise MultipleFoldsError(
            f"{len(field)} branches at t={curve.t!r}; only a single fold is supported"
        )
    if len(field) != 3:
        raise NoFoldError(f"{len(field)} branches at t={curve.t!r} do not form a fold")
    surgered, x1, p_left, p_right, label_left, label_right, delta_S = _cut_and_join(
        curve, field, tol
    )
    segment = (surgered.labels >= label_left) & (surgered.labels <= label_right)
    i1, i2 = np.nonzero(segment)[0][[0, -1]]

    attempts = 1 if t1 is not None else MAX_BACKFLOW_HALVINGS + 1
    t1 = t1 if t1 is not None else 0.5 * beta
    for attempt in range(attempts):
        step = max_step or min(1e-3, t1 / 100.0)
        xb, pb, Sb = flow_points(
            symbol, surgered.x, surgered.p, surgered.S, curve.t, curve.t - t1, step
        )
        if np.all(np.diff(xb) > 0):
            break
        logger.debug("Back-flow by t1=%.6g refolds; halving", t1)
        if attempt < attempts - 1:
            t1 *= 0.5
    else:
        raise RefoldError(f"the back-flowed curve is not a graph over x (last t1={t1!r})")

    logger.debug(
        "Surgery at t1*=%.6f: x1*=%.6f, angle points %.6f < %.6f after t1=%.6g",
        curve.t,
        x1,
        xb[i1],
        xb[i2],
        t1,
    )
    return SurgeredManifold(
        base=curve,
        surgered=surgered,
        backflowed=_regraph(surgered, curve.t - t1, xb, pb, Sb, surgered.labels),
        x1_star=x1,
        p_left=p_left,
        p_right=p_right,
        label_left=label_left,
        label_right=label_right,
        delta_S=delta_S,
        a1=float(xb[i1]),
        a2=float(xb[i2]),
        p_a1=float(pb[i1]),
        p_a2=float(pb[i2]),
        t1=float(t1),
    )


def surgery_from_fan(
    fan: TrajectoryFan,
    beta: float = DEFAULT_BETA,
    t1: Optional[float] = None,
    tol: float = XTOL,
    max_step: Optional[float] = None,
) -> SurgeredManifold:
    """Surgery at t* + beta for the first caustic of a plain fan."""
    if fan.symbol is None:
        raise PreconditionError("surgery needs a fan of plain Hamiltonian flow")
    events = detect_caustic(fan)
    if not events:
        raise NoFoldError("the fan has no caustic")
    first = events[0]
    curve = snapshot(fan, first.t_star + beta)
    surgered = manifold_surgery(curve, fan.symbol, beta=beta, t1=t1, tol=tol, max_step=max_step)
    return dataclasses.replace(surgered, t_star=first.t_star, x_star=first.x_star)
