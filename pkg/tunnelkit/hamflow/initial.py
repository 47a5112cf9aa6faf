from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from tunnelkit.errors import PreconditionError
from tunnelkit.models.initial_data import InitialDataConfig
from tunnelkit.symbol.functions import ScalarFunction, create_function


class InitialData:
    """Phase S0 and amplitude phi0 of the Cauchy data, with the derivatives the flow needs."""

    def __init__(self, phase: ScalarFunction, amplitude: ScalarFunction):
        self.phase = phase
        self.amplitude = amplitude

    @classmethod
    def from_config(cls, config: InitialDataConfig) -> "InitialData":
        return cls(create_function(config.phase_config()), create_function(config.amplitude))

    def S0(self, x):
        return self.phase(x)

    def p0(self, x):
        return self.phase.derivative(x)

    def dp0(self, x):
        return self.phase.second_derivative(x)

    def phi0(self, x):
        return self.amplitude(x)


@dataclass(frozen=True, eq=False)
class InitialManifold:
    """Start states of a fan: one entry per label."""

    labels: np.ndarray
    x: np.ndarray
    p: np.ndarray
    S: np.ndarray
    J: np.ndarray
    dpdx0: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        if self.labels.ndim != 1 or self.labels.size < 2:
            raise PreconditionError("a fan needs at least two labels")
        if np.any(np.diff(self.labels) <= 0):
            raise PreconditionError("labels must be strictly increasing")
        for name in ("x", "p", "S", "J", "dpdx0"):
            value = getattr(self, name)
            if value.shape != self.labels.shape or not np.all(np.isfinite(value)):
                raise PreconditionError(f"initial {name} must be finite on every label")

    @classmethod
    def from_initial_data(
        cls,
        data: InitialData,
        labels: np.ndarray,
        shift: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        shift_derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        t0: float = 0.0,
    ) -> "InitialManifold":
        labels = np.asarray(labels, dtype=float)
        x = labels.copy()
        J = np.ones_like(labels)
        if shift is not None:
            x = x + shift(labels)
            if shift_derivative is not None:
                J = J + shift_derivative(labels)
        return cls(
            labels=labels,
            x=x,
            p=np.asarray(data.p0(labels), dtype=float) + 0.0 * labels,
            S=np.asarray(data.S0(labels), dtype=float) + 0.0 * labels,
            J=J,
            dpdx0=np.asarray(data.dp0(labels), dtype=float) + 0.0 * labels,
            t0=t0,
        )


def uniform_labels(x_min: float, x_max: float, spacing: float) -> np.ndarray:
    count = int(round((x_max - x_min) / spacing)) + 1
    if count < 2:
        raise PreconditionError("label window must hold at least two labels")
    return np.linspace(x_min, x_max, count)
