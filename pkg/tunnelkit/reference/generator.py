"""Discrete Kolmogorov-Feller generator in log gauge.

For u = exp(L) on a uniform grid the operator

    u_t = eps A(x) u_xx + (V(x, t) / eps) u + (lambda(t) / eps) (u(x - eps nu0) - u)

is split as D^-1 P D = diag(r) + N with D = diag(u): r = (P u) / u is the
local rate and N annihilates constants. N_d is the tridiagonal diffusion part,
N_j the jump part; both have nonnegative off-diagonals. The end nodes are
Dirichlet nodes: their rows of N and their rate are zero, so u keeps its
initial far-field value there. Jump targets beyond the grid read L continued
linearly from the nearest end.
"""
import logging
from typing import NamedTuple, Optional

import numpy as np
from scipy import sparse

from tunnelkit.errors import PreconditionError
from tunnelkit.reference.grid import check_uniform
from tunnelkit.symbol.base import BaseHamiltonianSymbol
from tunnelkit.symbol.kolmogorov_feller import KolmogorovFellerSymbol


class GaugedOperator(NamedTuple):
    rate: np.ndarray
    # N_d bands: lower[i] couples node i to i - 1, upper[i] to i + 1
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    jump: Optional[sparse.csr_matrix]
    jump_outflow: np.ndarray

    def apply_diffusion(self, w: np.ndarray) -> np.ndarray:
        out = self.diag * w
        out[1:] += self.lower[1:] * w[:-1]
        out[:-1] += self.upper[:-1] * w[1:]
        return out

    def apply_jump(self, w: np.ndarray) -> np.ndarray:
        if self.jump is None:
            return np.zeros_like(w)
        return self.jump @ w


def _on_grid(function, xgrid: np.ndarray) -> np.ndarray:
    return np.asarray(function(xgrid), dtype=float) + 0.0 * xgrid


def _fitting_factor(slope_dx: np.ndarray) -> np.ndarray:
    # (z/2)^2 / sinh(z/2)^2 makes the second difference exact on exp(kappa x)
    half = 0.5 * np.abs(slope_dx)
    factor = np.ones_like(half)
    nonzero = half > 1e-8
    with np.errstate(over="ignore"):
        factor[nonzero] = (half[nonzero] / np.sinh(half[nonzero])) ** 2
    return factor


class DiscreteGenerator:
    def __init__(
        self,
        symbol: BaseHamiltonianSymbol,
        xgrid: np.ndarray,
        epsilon: float,
        exponential_fitting: bool = False,
        logger: Optional[logging.Logger] = None,
    ):
        if not isinstance(symbol, KolmogorovFellerSymbol):
            raise PreconditionError(
                "the reference generator needs a quadratic, potential or jump symbol"
            )
        if epsilon <= 0:
            raise PreconditionError("epsilon must be positive")
        self.symbol = symbol
        self.xgrid = np.asarray(xgrid, dtype=float)
        self.dx = check_uniform(self.xgrid)
        self.epsilon = epsilon
        self.exponential_fitting = exponential_fitting
        self.logger = logger or logging.getLogger(__name__)
        self.diffusion = _on_grid(symbol.diffusion, self.xgrid)
        if np.any(self.diffusion < 0):
            raise PreconditionError("diffusion coefficient must be nonnegative")
        self.potential = _on_grid(symbol.potential, self.xgrid)
        self.has_jump = not symbol.intensity.is_zero()
        if self.has_jump:
            self._prepare_shift()

    def _prepare_shift(self):
        n = self.xgrid.size
        shifted = self.xgrid - self.epsilon * self.symbol.jump_size
        q = (shifted - self.xgrid[0]) / self.dx
        j = np.floor(q).astype(int)
        frac = q - j
        at_end = (j == n - 1) & (frac == 0.0)
        j[at_end] = n - 2
        frac[at_end] = 1.0
        self._shifted = shifted
        self._j = j
        self._frac = frac
        self._inside = (j >= 0) & (j <= n - 2)
        self._rows = np.arange(n)
        off_grid = int(np.count_nonzero(~self._inside))
        if off_grid:
            self.logger.debug("jump targets of %d nodes fall off the grid", off_grid)

    def potential_at(self, t: float) -> np.ndarray:
        if self.symbol.potential_time is None:
            return self.potential
        return self.potential + float(self.symbol.potential_time(t))

    def intensity_at(self, t: float) -> float:
        lam = float(self.symbol.intensity(t))
        if lam < 0:
            raise PreconditionError(f"jump intensity is negative at t={t}")
        return lam

    def assemble(self, log_u: np.ndarray, t: float) -> GaugedOperator:
        log_u = np.asarray(log_u, dtype=float)
        n = self.xgrid.size
        if log_u.shape != (n,):
            raise PreconditionError("log_u must hold one value per grid node")
        g = np.pad(log_u, 1, mode="edge")
        up = g[2:] - g[1:-1]
        down = g[:-2] - g[1:-1]
        c = self.epsilon * self.diffusion / self.dx**2
        if self.exponential_fitting:
            c = c * _fitting_factor(0.5 * (g[2:] - g[:-2]))
        with np.errstate(over="ignore", invalid="ignore"):
            rate = c * (np.expm1(up) + np.expm1(down))
            upper = c * np.exp(up)
            lower = c * np.exp(down)
        rate = rate + self.potential_at(t) / self.epsilon
        upper[[0, -1]] = 0.0
        lower[[0, -1]] = 0.0
        diag = -(upper + lower)

        jump = None
        outflow = np.zeros(n)
        if self.has_jump:
            jump_rate, jump, outflow = self._assemble_jump(log_u, t)
            rate = rate + jump_rate
        rate[[0, -1]] = 0.0
        return GaugedOperator(
            rate=rate,
            lower=lower,
            diag=diag,
            upper=upper,
            jump=jump,
            jump_outflow=outflow,
        )

    def _assemble_jump(self, log_u: np.ndarray, t: float):
        n = log_u.size
        scale = self.intensity_at(t) / self.epsilon
        j, frac, inside = self._j, self._frac, self._inside
        ratio = np.empty(n)
        k_lo = np.zeros(n)
        k_hi = np.zeros(n)
        with np.errstate(over="ignore"):
            jj = j[inside]
            k_lo[inside] = (1.0 - frac[inside]) * np.exp(log_u[jj] - log_u[inside])
            k_hi[inside] = frac[inside] * np.exp(log_u[jj + 1] - log_u[inside])
            ratio[inside] = k_lo[inside] + k_hi[inside]
            # off the grid, L continues linearly
            left = ~inside & (self._shifted < self.xgrid[0])
            slope_left = (log_u[1] - log_u[0]) / self.dx
            slope_right = (log_u[-1] - log_u[-2]) / self.dx
            ghost = np.where(
                left,
                log_u[0] + (self._shifted - self.xgrid[0]) * slope_left,
                log_u[-1] + (self._shifted - self.xgrid[-1]) * slope_right,
            )
            ratio[~inside] = np.exp(ghost[~inside] - log_u[~inside])
        rate = scale * (ratio - 1.0)

        coupled = inside.copy()
        coupled[[0, -1]] = False
        rows = self._rows[coupled]
        lo = scale * k_lo[coupled]
        hi = scale * k_hi[coupled]
        data = np.concatenate([lo, hi, -(lo + hi)])
        cols = np.concatenate([j[coupled], j[coupled] + 1, rows])
        matrix = sparse.csr_matrix(
            (data, (np.concatenate([rows, rows, rows]), cols)), shape=(n, n)
        )
        outflow = np.zeros(n)
        outflow[coupled] = lo + hi
        return rate, matrix, outflow

    def rate(self, log_u: np.ndarray, t: float = 0.0) -> np.ndarray:
        return self.assemble(log_u, t).rate


def generator_rate(
    symbol: BaseHamiltonianSymbol,
    xgrid,
    log_u,
    epsilon: float,
    t: float = 0.0,
    exponential_fitting: bool = False,
) -> np.ndarray:
    """(P u) / (eps u) on the grid: u_t / u for the reference equation.

    For u = exp(-S / eps), eps times this rate is H(x, S_x) + O(eps) at
    interior nodes; it is zero at the two frozen end nodes.
    """
    generator = DiscreteGenerator(
        symbol, xgrid, epsilon, exponential_fitting=exponential_fitting
    )
    return generator.rate(log_u, t)
