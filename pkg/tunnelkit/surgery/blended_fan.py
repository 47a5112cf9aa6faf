"""Blended characteristics that stay non-crossing through the caustic.

Inside the window the velocity is (1 - B) v + B c with the block velocity c;
outside it is the plain Hamiltonian one. After the blend the window moves
as a rigid block, and outside trajectories that reach it are captured:
they are projected to keep a gap of A eps dx0 / 2 to their inner neighbour
and then move with the block.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from opentelemetry import trace
from scipy.integrate import trapezoid

from tunnelkit.constants import DEGENERATE_JUMP_TOL, MAX_SHIFT_DOUBLINGS
from tunnelkit.errors import FloorViolationError, InsertionError, PreconditionError
from tunnelkit.hamflow.fan import TrajectoryFan, default_max_step
from tunnelkit.models.blend import BlockVelocityRule
from tunnelkit.surgery.blend import BaseBlendProfile
from tunnelkit.surgery.insertion import Insertion
from tunnelkit.surgery.manifold_surgery import SurgeredManifold
from tunnelkit.symbol.base import BaseHamiltonianSymbol

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

# blend transitions are resolved with this many steps per epsilon
STEPS_PER_EPSILON = 20


@dataclass(frozen=True, eq=False)
class BlendedFan:
    fan: TrajectoryFan
    window: np.ndarray
    captured: np.ndarray
    block_velocity: np.ndarray
    blend: BaseBlendProfile
    floor_constant: Optional[float]
    non_crossing: bool

    @property
    def epsilon(self) -> float:
        return self.blend.epsilon

    @property
    def shift(self) -> float:
        return self.blend.shift

    def block(self, k: int) -> np.ndarray:
        return self.window | self.captured[k]

    def late_times(self) -> np.ndarray:
        return self.fan.tgrid >= self.blend.t_star + 2.0 * self.blend.beta

    def min_window_jacobian(self) -> Optional[float]:
        late = self.late_times()
        if not np.any(late):
            return None
        return float(np.min(self.fan.J[late][:, self.window]))

    def acceptable(self) -> bool:
        return self.non_crossing and (self.floor_constant is None or self.floor_constant > 0)


def _shift(labels: np.ndarray, center: float, half_width: float, amount: float) -> np.ndarray:
    return amount * np.clip(labels - center, -half_width, half_width)


def _contiguous(window: np.ndarray) -> Tuple[int, int]:
    idx = np.nonzero(window)[0]
    if idx.size < 2:
        raise PreconditionError("the blend window must contain at least two labels")
    if idx[-1] - idx[0] + 1 != idx.size:
        raise PreconditionError("the blend window must be a contiguous run of labels")
    return int(idx[0]), int(idx[-1])


class BlendedCharacteristics:
    """Fixed-step RK4 for the blended system, with capture after every step.

    With an ``insertion`` the window velocity before blending is the
    insertion's linear profile and window momenta stay frozen; otherwise
    window points follow (1 - B) times the Hamiltonian field.
    """

    def __init__(
        self,
        symbol: BaseHamiltonianSymbol,
        labels: np.ndarray,
        window: np.ndarray,
        blend: BaseBlendProfile,
        c_rule: BlockVelocityRule = BlockVelocityRule.INSERTION_ENDPOINTS,
        insertion: Optional[Insertion] = None,
        logger: Optional[logging.Logger] = None,
    ):
        self.symbol = symbol
        self.labels = labels
        self.window = window
        self.blend = blend
        self.c_rule = c_rule
        self.insertion = insertion
        self.logger = logger or logging.getLogger(__name__)
        self.i_lo, self.i_hi = _contiguous(window)
        gaps = 0.5 * blend.shift * blend.epsilon * np.diff(labels)
        # chain offsets of the outside labels measured from the window edges
        left = np.zeros(self.i_lo + 1)
        left[:-1] = np.cumsum(gaps[: self.i_lo][::-1])[::-1]
        right = np.zeros(labels.size - self.i_hi)
        right[1:] = np.cumsum(gaps[self.i_hi :])
        self.left_offsets = left
        self.right_offsets = right

    def _pair_velocity(self, x1, p1, x2, p2, t: float) -> float:
        jump = p2 - p1
        if abs(jump) < DEGENERATE_JUMP_TOL:
            raise InsertionError("block velocity undefined: equal momenta at both sides")
        H2 = float(self.symbol.eval(x2, p2, t))
        H1 = float(self.symbol.eval(x1, p1, t))
        return (H2 - H1) / jump

    def block_velocity(self, t: float, x, p, ends_x, ends_p, captured) -> float:
        if self.c_rule == BlockVelocityRule.SIDE_STATES:
            free_left = np.nonzero(~captured[: self.i_lo])[0]
            free_right = np.nonzero(~captured[self.i_hi + 1 :])[0]
            if free_left.size and free_right.size:
                il = int(free_left[-1])
                ir = self.i_hi + 1 + int(free_right[0])
                return self._pair_velocity(x[il], p[il], x[ir], p[ir], t)
        return self._pair_velocity(ends_x[0], ends_p[0], ends_x[1], ends_p[1], t)

    def rhs(self, t: float, x, p, ends_x, ends_p, captured):
        c = self.block_velocity(t, x, p, ends_x, ends_p, captured)
        B = float(self.blend(t))
        dx = self.symbol.grad_p(x, p, t)
        dp = -self.symbol.grad_x(x, p, t)
        w = self.window
        if self.insertion is not None:
            inner_dx = self.insertion.velocity(self.labels[w], t)
            inner_dp = 0.0
        else:
            inner_dx, inner_dp = dx[w], dp[w]
        dx = dx.copy()
        dp = dp.copy()
        dx[w] = (1.0 - B) * inner_dx + B * c
        dp[w] = (1.0 - B) * inner_dp
        dx[captured] = c
        dp[captured] = 0.0
        dS = p * dx - self.symbol.eval(x, p, t)
        ends_dx = self.symbol.grad_p(ends_x, ends_p, t)
        ends_dp = -self.symbol.grad_x(ends_x, ends_p, t)
        return dx, dp, dS, ends_dx, ends_dp

    def project(self, x: np.ndarray, captured: np.ndarray):
        """Push overtaking outside labels against the block and mark them captured."""
        x = x.copy()
        captured = captured.copy()
        lo, hi = self.i_lo, self.i_hi
        # left side: y_i = min(x_i, y_{i+1} - gap_i); captured labels follow the chain
        head = np.where(captured[:lo], np.inf, x[:lo])
        chain = np.concatenate([head, [x[lo]]]) + self.left_offsets
        bound = np.minimum.accumulate(chain[::-1])[::-1]
        moved = bound[:-1] < chain[:-1]
        captured[:lo] |= moved
        x[:lo] = np.where(moved, bound[:-1] - self.left_offsets[:-1], x[:lo])
        # right side mirrors it with maxima
        tail = np.where(captured[hi + 1 :], -np.inf, x[hi + 1 :])
        chain = np.concatenate([[x[hi]], tail]) - self.right_offsets
        bound = np.maximum.accumulate(chain)
        moved = bound[1:] > chain[1:]
        captured[hi + 1 :] |= moved
        x[hi + 1 :] = np.where(moved, bound[1:] + self.right_offsets[1:], x[hi + 1 :])
        return x, captured

    def _step_size(self, t: float, max_step: float) -> float:
        if self.blend.transition(t):
            return min(max_step, self.blend.epsilon / STEPS_PER_EPSILON)
        return max_step

    def run(self, x, p, S, ends_x, ends_p, tgrid: np.ndarray, max_step: float) -> BlendedFan:
        n_t, n_l = tgrid.size, self.labels.size
        out = {name: np.empty((n_t, n_l)) for name in ("x", "p", "S")}
        captured_out = np.zeros((n_t, n_l), dtype=bool)
        c_out = np.empty(n_t)
        capture = not self.blend.is_off
        captured = np.zeros(n_l, dtype=bool)
        state = [np.array(v, dtype=float) for v in (x, p, S, ends_x, ends_p)]
        steps = 0
        for k in range(n_t):
            t = float(tgrid[k - 1]) if k > 0 else float(tgrid[0])
            while k > 0 and t < tgrid[k]:
                remaining = float(tgrid[k]) - t
                h = min(self._step_size(t, max_step), remaining)
                state = self._rk4(t, h, state, captured)
                if capture:
                    state[0], captured = self.project(state[0], captured)
                t = float(tgrid[k]) if h == remaining else t + h
                steps += 1
            out["x"][k], out["p"][k], out["S"][k] = state[0], state[1], state[2]
            captured_out[k] = captured
            c_out[k] = self.block_velocity(
                float(tgrid[k]), state[0], state[1], state[3], state[4], captured
            )
        if self.insertion is not None and self.symbol.time_dependent:
            for k, t in enumerate(tgrid):
                out["p"][k, self.window] = self.insertion.momentum(self.labels[self.window], t)
        self.logger.debug(
            "Blended fan: %d steps, %d labels captured at the end", steps, int(captured.sum())
        )
        J = np.gradient(out["x"], self.labels, axis=1)
        fan = TrajectoryFan(
            labels=self.labels.copy(),
            tgrid=tgrid.copy(),
            x=out["x"],
            p=out["p"],
            S=out["S"],
            J=J,
            dpdx0=np.gradient(out["p"], self.labels, axis=1),
            max_step=max_step,
        )
        floor = None
        if capture:
            late = tgrid >= self.blend.t_star + 2.0 * self.blend.beta
            if np.any(late):
                floor = float(np.min(J[late][:, self.window])) / self.blend.epsilon
            else:
                self.logger.warning(
                    "Horizon %.6f ends before t*+2beta=%.6f; Jacobian floor not measured",
                    tgrid[-1],
                    self.blend.t_star + 2.0 * self.blend.beta,
                )
        return BlendedFan(
            fan=fan,
            window=self.window.copy(),
            captured=captured_out,
            block_velocity=c_out,
            blend=self.blend,
            floor_constant=floor,
            non_crossing=bool(np.all(np.diff(out["x"], axis=1) > 0)),
        )

    def _rk4(self, t: float, h: float, state: List[np.ndarray], captured: np.ndarray):
        def stage(s, scale, k):
            return [a + scale * b for a, b in zip(s, k)]

        def rhs(tt, s):
            return self.rhs(tt, s[0], s[1], s[3], s[4], captured)

        k1 = rhs(t, state)
        k2 = rhs(t + 0.5 * h, stage(state, 0.5 * h, k1))
        k3 = rhs(t + 0.5 * h, stage(state, 0.5 * h, k2))
        k4 = rhs(t + h, stage(state, h, k3))
        return [
            s + h / 6.0 * (a + 2.0 * b + 2.0 * c + d)
            for s, a, b, c, d in zip(state, k1, k2, k3, k4)
        ]


def _with_shift_search(
    build: Callable[[BaseBlendProfile], BlendedFan],
    blend: BaseBlendProfile,
    auto_shift: bool,
    logger: logging.Logger,
) -> BlendedFan:
    if blend.is_off:
        return build(blend)
    if not auto_shift:
        result = build(blend)
        if not result.acceptable():
            raise FloorViolationError(
                f"A={blend.shift!r}: floor constant {result.floor_constant!r}, "
                f"non-crossing={result.non_crossing}; retune A"
            )
        return result
    shift = 1.0
    for _ in range(MAX_SHIFT_DOUBLINGS + 1):
        result = build(blend.with_shift(shift))
        logger.debug(
            "Shift search: A=%g gives C=%s, non-crossing=%s",
            shift,
            result.floor_constant,
            result.non_crossing,
        )
        if result.acceptable():
            return result
        shift *= 2.0
    raise FloorViolationError(
        f"no shift constant up to A={shift / 2.0!r} gives a positive Jacobian floor"
    )


def _prepare_tgrid(tgrid, t0: float) -> np.ndarray:
    tgrid = np.asarray(tgrid, dtype=float)
    if tgrid.ndim != 1 or tgrid.size < 2 or np.any(np.diff(tgrid) <= 0):
        raise PreconditionError("tgrid must be strictly increasing with at least two times")
    if abs(tgrid[0] - t0) > 1e-12:
        raise PreconditionError(f"tgrid must start at t0={t0!r}")
    return tgrid


def blended_fan_homogeneous(
    symbol: BaseHamiltonianSymbol,
    insertion: Insertion,
    labels,
    blend: BaseBlendProfile,
    tgrid,
    S0: Optional[Callable] = None,
    c_rule: BlockVelocityRule = BlockVelocityRule.INSERTION_ENDPOINTS,
    auto_shift: bool = False,
    max_step: Optional[float] = None,
    logger: Optional[logging.Logger] = None,
) -> BlendedFan:
    """Blended fan of insertion-modified data; starts at x0 + sigma(x0)."""
    logger = logger or logging.getLogger(__name__)
    labels = np.asarray(labels, dtype=float)
    tgrid = _prepare_tgrid(tgrid, float(insertion.tgrid[0]))
    window = insertion.contains(labels)
    max_step = max_step or default_max_step(tgrid)
    p = np.asarray(insertion.u0(labels), dtype=float) + 0.0 * labels
    p[window] = insertion.momentum(labels[window], tgrid[0])
    S = np.zeros_like(labels) if S0 is None else np.asarray(S0(labels), dtype=float) + 0.0 * labels
    ends = np.array([insertion.lo, insertion.hi])

    def build(profile: BaseBlendProfile) -> BlendedFan:
        amount = profile.shift * profile.epsilon
        system = BlendedCharacteristics(
            symbol, labels, window, profile, c_rule, insertion=insertion, logger=logger
        )
        return system.run(
            labels + _shift(labels, insertion.x0_star, insertion.beta, amount),
            p,
            S,
            ends + _shift(ends, insertion.x0_star, insertion.beta, amount),
            np.array([insertion.u_left, insertion.u_right]),
            tgrid,
            max_step,
        )

    with tracer.start_as_current_span("surgery.blended_fan_homogeneous"):
        return _with_shift_search(build, blend, auto_shift, logger)


def backflow_and_blend(
    symbol: BaseHamiltonianSymbol,
    surgered: SurgeredManifold,
    blend: BaseBlendProfile,
    tgrid,
    c_rule: BlockVelocityRule = BlockVelocityRule.INSERTION_ENDPOINTS,
    auto_shift: bool = False,
    max_step: Optional[float] = None,
    logger: Optional[logging.Logger] = None,
) -> BlendedFan:
    """Blended fan started from the back-flowed surgered curve at t1* - t1.

    Labels are the positions on the back-flowed curve; the window is the
    open interval between the angle points a1 < a2.
    """
    logger = logger or logging.getLogger(__name__)
    if symbol.time_dependent:
        raise PreconditionError("the inhomogeneous construction needs a time-independent symbol")
    curve = surgered.backflowed
    tgrid = _prepare_tgrid(tgrid, curve.t)
    labels = curve.labels
    window = surgered.window()
    max_step = max_step or default_max_step(tgrid)
    center = 0.5 * (surgered.a1 + surgered.a2)
    half_width = 0.5 * (surgered.a2 - surgered.a1)
    ends = np.array([surgered.a1, surgered.a2])

    def build(profile: BaseBlendProfile) -> BlendedFan:
        amount = profile.shift * profile.epsilon
        system = BlendedCharacteristics(symbol, labels, window, profile, c_rule, logger=logger)
        return system.run(
            labels + _shift(labels, center, half_width, amount),
            curve.p,
            curve.S,
            ends + _shift(ends, center, half_width, amount),
            np.array([surgered.p_a1, surgered.p_a2]),
            tgrid,
            max_step,
        )

    with tracer.start_as_current_span("surgery.backflow_and_blend"):
        return _with_shift_search(build, blend, auto_shift, logger)


def limiting_jacobian_deviation(
    results: Sequence[BlendedFan],
    insertion: Insertion,
    margin: Optional[float] = None,
) -> List[float]:
    """max |J - H(t* - t) J0| over the window, away from t*, for each blended fan.

    J0 is the Jacobian of the unshifted, unblended insertion; H is the
    Heaviside step. The two end labels of the window, whose difference
    quotients reach across its edge, are left out.
    """
    deviations = []
    for result in results:
        gap = 2.0 * result.blend.beta if margin is None else margin
        t = result.fan.tgrid
        away = np.abs(t - insertion.t_star) >= gap
        reference = np.where(t < insertion.t_star, insertion.jacobian(t), 0.0)
        lo, hi = _contiguous(result.window)
        J = result.fan.J[away][:, lo + 1 : hi]
        deviations.append(float(np.max(np.abs(J - reference[away][:, None]))))
    return deviations


def captured_mass(result: BlendedFan, rho0: Callable) -> np.ndarray:
    """int rho0 over the block labels (window plus captured) at every output time."""
    labels = result.fan.labels
    weights = np.asarray(rho0(labels), dtype=float) + 0.0 * labels
    masses = []
    for k in range(result.fan.tgrid.size):
        block = result.block(k)
        masses.append(float(trapezoid(weights[block], labels[block])))
    return np.array(masses)


def fit_floor_constant(epsilons: Sequence[float], min_jacobians: Sequence[float]) -> float:
    """Slope of the least-squares line through (eps, min J)."""
    return float(np.polyfit(np.asarray(epsilons), np.asarray(min_jacobians), 1)[0])
