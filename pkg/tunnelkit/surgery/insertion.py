"""Insertion into the initial data of a spatially homogeneous problem.

On the window (x0* - beta, x0* + beta) the initial momentum u0 is replaced by
u1(x0, t) solving H_p(u1, t) = -K(t) x0 + b(t). K and b match the velocities
of u0 at both window ends, so every trajectory of the window reaches the
same point when int_0^t K = 1.
"""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import brentq

from tunnelkit.constants import DEGENERATE_JUMP_TOL
from tunnelkit.errors import InsertionError, PreconditionError, RootFindingError
from tunnelkit.symbol.base import BaseHamiltonianSymbol

logger = logging.getLogger(__name__)

INVERTIBILITY_SAMPLES = 33
MAX_BRACKET_EXPANSIONS = 50


@dataclass(frozen=True, eq=False)
class Insertion:
    symbol: BaseHamiltonianSymbol
    u0: Callable
    x0_star: float
    beta: float
    tgrid: np.ndarray
    K: np.ndarray
    b: np.ndarray
    int_K: np.ndarray
    int_b: np.ndarray
    u_left: float
    u_right: float
    t_star: float

    @property
    def lo(self) -> float:
        return self.x0_star - self.beta

    @property
    def hi(self) -> float:
        return self.x0_star + self.beta

    def contains(self, labels) -> np.ndarray:
        labels = np.asarray(labels, dtype=float)
        return (labels > self.lo) & (labels < self.hi)

    def velocity(self, x0, t: float) -> np.ndarray:
        K = np.interp(t, self.tgrid, self.K)
        b = np.interp(t, self.tgrid, self.b)
        return -K * np.asarray(x0, dtype=float) + b

    def jacobian(self, t) -> np.ndarray:
        """Dx/Dx0 of the unshifted insertion characteristics, 1 - int_0^t K."""
        return 1.0 - np.interp(t, self.tgrid, self.int_K)

    def position(self, x0, t: float) -> np.ndarray:
        x0 = np.asarray(x0, dtype=float)
        return x0 * self.jacobian(t) + np.interp(t, self.tgrid, self.int_b)

    def momentum(self, x0, t: float) -> np.ndarray:
        """u1(x0, t) by bracketed root finding of H_p(u, t) = -K(t) x0 + b(t)."""
        targets = np.atleast_1d(self.velocity(x0, t))
        lo, hi = min(self.u_left, self.u_right), max(self.u_left, self.u_right)
        return np.array([self._invert(float(target), lo, hi, t) for target in targets])

    def _invert(self, target: float, lo: float, hi: float, t: float) -> float:
        def residual(u):
            return float(self.symbol.grad_p(0.0, u, t)) - target

        width = max(hi - lo, 1e-12)
        for _ in range(MAX_BRACKET_EXPANSIONS):
            if residual(lo) * residual(hi) <= 0:
                break
            lo, hi = lo - width, hi + width
            width *= 2.0
        else:
            raise RootFindingError(f"could not bracket H_p(u)={target!r} at t={t!r}")
        try:
            return float(brentq(residual, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps))
        except (RuntimeError, ValueError) as e:
            raise RootFindingError(f"H_p(u)={target!r} at t={t!r}: {e}")

    def profile(self, labels, t: float) -> np.ndarray:
        """u0 outside the window and u1 inside, on the given labels."""
        labels = np.asarray(labels, dtype=float)
        inside = self.contains(labels)
        values = np.asarray(self.u0(labels), dtype=float) + 0.0 * labels
        values[inside] = self.momentum(labels[inside], t)
        return values


def _check_homogeneous(symbol: BaseHamiltonianSymbol, u_lo: float, u_hi: float, tgrid):
    xs = np.linspace(-1.0, 1.0, 5)
    us = np.linspace(u_lo, u_hi, 5)
    for t in (tgrid[0], tgrid[-1]):
        if np.max(np.abs(symbol.grad_x(xs, us, t))) > 1e-9:
            raise PreconditionError("the insertion needs a symbol that does not depend on x")


def _check_invertible(symbol: BaseHamiltonianSymbol, u_lo: float, u_hi: float, tgrid):
    us = np.linspace(u_lo, u_hi, INVERTIBILITY_SAMPLES)
    times = tgrid[:: max(1, tgrid.size // 50)]
    for t in times:
        if np.any(symbol.hess_pp(0.0, us, t) <= 0.0):
            raise InsertionError(
                f"H_pp is not positive on [{u_lo!r}, {u_hi!r}] at t={t!r}; "
                "H_p cannot be inverted on the insertion"
            )


def insertion_initial_data(
    u0: Callable,
    x0_star: float,
    beta: float,
    symbol: BaseHamiltonianSymbol,
    tgrid,
) -> Insertion:
    if beta <= 0:
        raise PreconditionError("insertion half-width beta must be positive")
    tgrid = np.asarray(tgrid, dtype=float)
    if tgrid.ndim != 1 or tgrid.size < 2 or np.any(np.diff(tgrid) <= 0):
        raise PreconditionError("tgrid must be strictly increasing with at least two times")
    u_left = float(u0(x0_star - beta))
    u_right = float(u0(x0_star + beta))
    u_lo, u_hi = min(u_left, u_right), max(u_left, u_right)
    _check_homogeneous(symbol, u_lo, u_hi, tgrid)
    _check_invertible(symbol, u_lo, u_hi, tgrid)
    v_left = np.array([float(symbol.grad_p(0.0, u_left, t)) for t in tgrid])
    v_right = np.array([float(symbol.grad_p(0.0, u_right, t)) for t in tgrid])
    if np.max(np.abs(v_right - v_left)) < DEGENERATE_JUMP_TOL:
        raise InsertionError(
            "u0 gives the same velocity at both window ends; endpoint matching is degenerate"
        )
    K = -(v_right - v_left) / (2.0 * beta)
    b = 0.5 * (v_right + v_left) + K * x0_star
    int_K = cumulative_trapezoid(K, tgrid, initial=0.0)
    int_b = cumulative_trapezoid(b, tgrid, initial=0.0)
    reached = np.nonzero(int_K >= 1.0)[0]
    if reached.size == 0 or reached[0] == 0:
        raise InsertionError("the insertion does not focus on the time grid")
    k = int(reached[0])
    w = (1.0 - int_K[k - 1]) / (int_K[k] - int_K[k - 1])
    t_star = float(tgrid[k - 1] + w * (tgrid[k] - tgrid[k - 1]))
    logger.debug(
        "Insertion on (%.6f, %.6f): K(t0)=%.6g, focusing at t=%.6f",
        x0_star - beta,
        x0_star + beta,
        K[0],
        t_star,
    )
    return Insertion(
        symbol=symbol,
        u0=u0,
        x0_star=float(x0_star),
        beta=float(beta),
        tgrid=tgrid,
        K=K,
        b=b,
        int_K=int_K,
        int_b=int_b,
        u_left=u_left,
        u_right=u_right,
        t_star=t_star,
    )
