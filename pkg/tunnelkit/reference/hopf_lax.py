"""Exact phase for H = A p^2 with constant A.

S(x, t) = min_y S0(y) + (x - y)^2 / (4 A t); the minimiser is a label whose
characteristic x = y + 2 A t S0'(y) reaches x.
"""
from typing import Tuple

import numpy as np
from scipy.optimize import brentq

from tunnelkit.errors import PreconditionError, RootFindingError
from tunnelkit.hamflow.initial import InitialData
from tunnelkit.symbol.base import BaseHamiltonianSymbol
from tunnelkit.symbol.functions import ConstantFunction
from tunnelkit.symbol.kolmogorov_feller import KolmogorovFellerSymbol


class QuadraticPhaseEvaluator:
    def __init__(
        self,
        data: InitialData,
        diffusion: float,
        t: float,
        label_window: Tuple[float, float] = (-8.0, 8.0),
        label_points: int = 8001,
    ):
        if diffusion <= 0:
            raise PreconditionError("diffusion coefficient must be positive")
        if t < 0:
            raise PreconditionError("time must be nonnegative")
        self.data = data
        self.diffusion = float(diffusion)
        self.t = float(t)
        self.label_grid = np.linspace(label_window[0], label_window[1], label_points)
        self._forward = self._characteristic(self.label_grid)

    @classmethod
    def from_symbol(
        cls, symbol: BaseHamiltonianSymbol, data: InitialData, t: float, **kwargs
    ) -> "QuadraticPhaseEvaluator":
        if (
            not isinstance(symbol, KolmogorovFellerSymbol)
            or not isinstance(symbol.diffusion, ConstantFunction)
            or not symbol.potential.is_zero()
            or symbol.potential_time is not None
            or not symbol.intensity.is_zero()
        ):
            raise PreconditionError("the exact phase needs H = A p^2 with constant A")
        return cls(data, symbol.diffusion.value, t, **kwargs)

    def _characteristic(self, y):
        return y + 2.0 * self.diffusion * self.t * self.data.p0(y)

    def _action_from(self, x, y):
        if self.t == 0.0:
            return self.data.S0(y)
        return self.data.S0(y) + (x - y) ** 2 / (4.0 * self.diffusion * self.t)

    @property
    def first_caustic_time(self) -> float:
        """Earliest t with 1 + 2 A t S0''(y) = 0 over the label window; inf if none."""
        dp0 = self.data.dp0(self.label_grid)
        focusing = dp0 < 0
        if not np.any(focusing):
            return np.inf
        return float(np.min(-1.0 / (2.0 * self.diffusion * dp0[focusing])))

    def label(self, xs) -> np.ndarray:
        """Minimal-action label per point."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if self.t == 0.0:
            return xs.copy()
        grid, forward = self.label_grid, self._forward
        labels = np.empty_like(xs)
        for i, x in enumerate(xs):
            gap = forward - x
            brackets = np.nonzero(gap[:-1] * gap[1:] <= 0)[0]
            if brackets.size == 0:
                raise RootFindingError(
                    f"no label of the window reaches x={x!r} at t={self.t!r}"
                )
            roots = []
            for j in brackets:
                if gap[j] == 0.0:
                    roots.append(grid[j])
                elif gap[j + 1] == 0.0:
                    roots.append(grid[j + 1])
                else:
                    roots.append(
                        brentq(
                            lambda y: float(self._characteristic(y)) - x,
                            grid[j],
                            grid[j + 1],
                            xtol=1e-14,
                        )
                    )
            roots = np.asarray(roots)
            labels[i] = roots[int(np.argmin(self._action_from(x, roots)))]
        return labels

    def action(self, xs) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        return self._action_from(xs, self.label(xs))

    def gradient(self, xs) -> np.ndarray:
        return self.data.p0(self.label(xs))

    def jacobian(self, xs) -> np.ndarray:
        y = self.label(xs)
        return 1.0 + 2.0 * self.diffusion * self.t * self.data.dp0(y)

    def amplitude(self, xs) -> np.ndarray:
        """phi0(y) / sqrt(J): the leading transport amplitude."""
        y = self.label(xs)
        J = 1.0 + 2.0 * self.diffusion * self.t * self.data.dp0(y)
        return self.data.phi0(y) / np.sqrt(np.abs(J))
