import logging
from typing import Optional, Tuple

import numpy as np
from opentelemetry import trace
from scipy.linalg import solve_banded

from tunnelkit.constants import INSTABILITY_GROWTH
from tunnelkit.errors import InstabilityError, PreconditionError
from tunnelkit.models.reference import ParabolicSchemeConfig
from tunnelkit.reference.generator import DiscreteGenerator, GaugedOperator
from tunnelkit.reference.grid import GridField
from tunnelkit.symbol.base import BaseHamiltonianSymbol

tracer = trace.get_tracer(__name__)

MAXIMUM_PRINCIPLE_TOL = 1e-9


def scheme_grid(scheme: ParabolicSchemeConfig, epsilon: float) -> np.ndarray:
    """Uniform grid over the scheme's domain with dx close to dx_over_epsilon * eps."""
    width = scheme.x_max - scheme.x_min
    cells = max(2, int(np.ceil(width / (scheme.dx_over_epsilon * epsilon) - 1e-9)))
    return np.linspace(scheme.x_min, scheme.x_max, cells + 1)


class ParabolicSolver:
    """Log-gauged theta-scheme for eps u_t = P(x, -eps d/dx) u.

    Every substep applies the local rate exactly for half a step, a theta step
    for the constant-annihilating remainder N (diffusion theta-implicit, jumps
    explicit), then the rate for the other half. With nonnegative
    off-diagonals and the positivity bound on dt, every factor keeps u > 0.
    """

    def __init__(
        self,
        symbol: BaseHamiltonianSymbol,
        scheme: Optional[ParabolicSchemeConfig] = None,
        logger: Optional[logging.Logger] = None,
    ):
        self.symbol = symbol
        self.scheme = scheme or ParabolicSchemeConfig()
        self.logger = logger or logging.getLogger(__name__)

    def solve(self, u0: GridField, epsilon: float, tgrid) -> GridField:
        tgrid = np.asarray(tgrid, dtype=float)
        if tgrid.ndim != 1 or tgrid.size < 1 or np.any(np.diff(tgrid) <= 0):
            raise PreconditionError("tgrid must be 1-d and increasing")
        if abs(u0.t - tgrid[0]) > 1e-12:
            raise PreconditionError("tgrid must start at the time of the initial field")
        log_u = u0.log_u[-1].copy()
        if not np.all(np.isfinite(log_u)):
            raise PreconditionError("initial data must be positive on the whole grid")
        generator = DiscreteGenerator(
            self.symbol,
            u0.xgrid,
            epsilon,
            exponential_fitting=self.scheme.exponential_fitting,
            logger=self.logger,
        )
        ceiling = float(np.max(log_u))
        out = np.empty((tgrid.size, log_u.size))
        out[0] = log_u
        total_substeps = 0
        with tracer.start_as_current_span("reference.fd_parabolic_solve") as span:
            span.set_attribute("nodes", int(log_u.size))
            span.set_attribute("epsilon", float(epsilon))
            for k in range(1, tgrid.size):
                log_u, substeps = self._advance(
                    generator, log_u, tgrid[k - 1], tgrid[k], ceiling
                )
                out[k] = log_u
                total_substeps += substeps
                self.logger.debug("t=%.6f reached in %d substeps", tgrid[k], substeps)
            span.set_attribute("substeps", total_substeps)
        return GridField(
            xgrid=u0.xgrid.copy(), tgrid=tgrid.copy(), log_u=out, epsilon=epsilon
        )

    def _time_step(self, operator: GaugedOperator, remaining: float) -> float:
        if not np.all(np.isfinite(operator.rate)):
            raise InstabilityError("local rate overflowed; the grid is too coarse")
        theta = self.scheme.theta
        dt = remaining
        spread = float(np.ptp(operator.rate))
        # a constant rate factors out exactly, only its spread limits dt
        if spread > 0:
            dt = min(dt, self.scheme.rate_fraction / spread)
        explicit = (1.0 - theta) * float(np.max(-operator.diag)) + float(
            np.max(operator.jump_outflow)
        )
        if explicit > 0:
            dt = min(dt, 1.0 / explicit)
        return dt

    def _advance(
        self,
        generator: DiscreteGenerator,
        log_u: np.ndarray,
        t_from: float,
        t_to: float,
        ceiling: float,
    ) -> Tuple[np.ndarray, int]:
        t = t_from
        substeps = 0
        time_dependent = self.symbol.time_dependent
        while t_to - t > 1e-14 * max(1.0, abs(t_to)):
            operator = generator.assemble(log_u, t)
            dt = self._time_step(operator, t_to - t)
            if t_to - (t + dt) < 1e-14 * max(1.0, abs(t_to)):
                dt = t_to - t
            if time_dependent:
                operator = generator.assemble(log_u, t + 0.5 * dt)
            log_u = self._step(operator, log_u, dt, t + dt)
            if self.scheme.check_maximum_principle:
                peak = float(np.max(log_u))
                if peak > ceiling + MAXIMUM_PRINCIPLE_TOL:
                    raise InstabilityError(
                        f"maximum principle violated at t={t + dt!r}: "
                        f"ln max u rose by {peak - ceiling!r}"
                    )
            t += dt
            substeps += 1
        return log_u, substeps

    def _step(
        self, operator: GaugedOperator, log_u: np.ndarray, dt: float, t_new: float
    ) -> np.ndarray:
        theta = self.scheme.theta
        with np.errstate(over="ignore", invalid="ignore"):
            half = np.exp(0.5 * dt * operator.rate)
            rhs = (
                half
                + (1.0 - theta) * dt * operator.apply_diffusion(half)
                + dt * operator.apply_jump(half)
            )
            if theta > 0:
                w = solve_banded((1, 1), self._implicit_bands(operator, dt), rhs)
            else:
                w = rhs
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InstabilityError(f"non-positive or non-finite values at t={t_new!r}")
        # N has zero row sums, so its part of the step cannot amplify
        if float(np.max(w / half)) > INSTABILITY_GROWTH:
            raise InstabilityError(f"growth beyond {INSTABILITY_GROWTH}x at t={t_new!r}")
        new = log_u + np.log(half) + np.log(w)
        if not np.all(np.isfinite(new)):
            raise InstabilityError(f"non-finite values at t={t_new!r}")
        return new

    def _implicit_bands(self, operator: GaugedOperator, dt: float) -> np.ndarray:
        theta_dt = self.scheme.theta * dt
        n = operator.diag.size
        ab = np.zeros((3, n))
        ab[0, 1:] = -theta_dt * operator.upper[:-1]
        ab[1] = 1.0 - theta_dt * operator.diag
        ab[2, :-1] = -theta_dt * operator.lower[1:]
        return ab


def fd_parabolic_solve(
    symbol: BaseHamiltonianSymbol,
    u0: GridField,
    epsilon: float,
    tgrid,
    scheme: Optional[ParabolicSchemeConfig] = None,
    logger: Optional[logging.Logger] = None,
) -> GridField:
    return ParabolicSolver(symbol, scheme, logger=logger).solve(u0, epsilon, tgrid)
