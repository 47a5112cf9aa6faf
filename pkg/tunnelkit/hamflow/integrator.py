"""Fixed-step classical Runge-Kutta for Hamiltonian characteristics.

The state carries position, momentum, action and the variational pair
(J, K) = (dx/dx0, dp/dx0); every component is a numpy array over labels.
"""
import math
from typing import NamedTuple, Union

import numpy as np

from tunnelkit.symbol.base import BaseHamiltonianSymbol

Time = Union[float, np.ndarray]


class FlowState(NamedTuple):
    x: np.ndarray
    p: np.ndarray
    S: np.ndarray
    J: np.ndarray
    K: np.ndarray

    def axpy(self, h, k: "FlowState") -> "FlowState":
        return FlowState(*(a + h * b for a, b in zip(self, k)))

    def is_finite(self) -> np.ndarray:
        finite = np.ones_like(self.x, dtype=bool)
        for component in self:
            finite &= np.isfinite(component)
        return finite


def hamiltonian_rhs(symbol: BaseHamiltonianSymbol, t: Time, state: FlowState) -> FlowState:
    x, p, _, J, K = state
    hp = symbol.grad_p(x, p, t)
    hx = symbol.grad_x(x, p, t)
    hpp = symbol.hess_pp(x, p, t)
    hxp = symbol.cross_xp(x, p, t)
    hxx = symbol.hess_xx(x, p, t)
    return FlowState(
        x=hp,
        p=-hx,
        S=p * hp - symbol.eval(x, p, t),
        J=hpp * K + hxp * J,
        K=-hxx * J - hxp * K,
    )


def rk4_step(symbol: BaseHamiltonianSymbol, t: Time, h: Time, state: FlowState) -> FlowState:
    k1 = hamiltonian_rhs(symbol, t, state)
    k2 = hamiltonian_rhs(symbol, t + 0.5 * h, state.axpy(0.5 * h, k1))
    k3 = hamiltonian_rhs(symbol, t + 0.5 * h, state.axpy(0.5 * h, k2))
    k4 = hamiltonian_rhs(symbol, t + h, state.axpy(h, k3))
    return FlowState(
        *(
            s + h / 6.0 * (a + 2.0 * b + 2.0 * c + d)
            for s, a, b, c, d in zip(state, k1, k2, k3, k4)
        )
    )


def step_count(duration: float, max_step: float) -> int:
    return max(1, int(math.ceil(abs(duration) / max_step - 1e-9)))


def integrate(
    symbol: BaseHamiltonianSymbol,
    state: FlowState,
    t_from: Time,
    t_to: Time,
    max_step: float,
) -> FlowState:
    """Integrate from t_from to t_to (either may be per-label arrays, backwards allowed)."""
    duration = np.asarray(t_to, dtype=float) - np.asarray(t_from, dtype=float)
    n = step_count(float(np.max(np.abs(duration))), max_step)
    h = duration / n
    if h.ndim == 0:
        h = float(h)
    t = t_from
    for _ in range(n):
        state = rk4_step(symbol, t, h, state)
        t = t + h
    return state
