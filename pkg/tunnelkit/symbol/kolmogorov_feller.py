import logging
from typing import List, Optional, Union

import numpy as np

from tunnelkit.models.function import ConstantFunctionConfig
from tunnelkit.models.symbol import (
    JumpSymbolConfig,
    PotentialSymbolConfig,
    QuadraticSymbolConfig,
)
from tunnelkit.symbol.base import BaseHamiltonianSymbol, _require_finite
from tunnelkit.symbol.functions import ConstantFunction, create_function

KolmogorovFellerConfig = Union[
    QuadraticSymbolConfig, PotentialSymbolConfig, JumpSymbolConfig
]


class KolmogorovFellerSymbol(BaseHamiltonianSymbol[KolmogorovFellerConfig]):
    """H = A(x) p^2 + V(x) + V(t) + lambda(t) (exp(nu0 p) - 1), all derivatives analytic."""

    def __init__(
        self,
        symbol_config: KolmogorovFellerConfig,
        logger: Optional[logging.Logger] = None,
    ):
        super().__init__(symbol_config, logger=logger)
        self.diffusion = create_function(symbol_config.diffusion)
        self.potential = (
            create_function(symbol_config.potential)
            if not isinstance(symbol_config, QuadraticSymbolConfig)
            else ConstantFunction(0.0)
        )
        potential_time = getattr(symbol_config, "potential_time", None)
        self.potential_time = (
            create_function(potential_time) if potential_time is not None else None
        )
        if isinstance(symbol_config, JumpSymbolConfig):
            self.intensity = create_function(symbol_config.intensity)
            self.jump_size = symbol_config.jump_size
        else:
            self.intensity = ConstantFunction(0.0)
            self.jump_size = 0.0
        self.time_dependent = self.potential_time is not None or not isinstance(
            self.intensity, ConstantFunction
        )

    def _jump_exp(self, p):
        with np.errstate(over="ignore"):
            return np.exp(self.jump_size * np.asarray(p, dtype=float))

    def hamiltonian(self, x, p, t):
        p = np.asarray(p, dtype=float)
        value = self.diffusion(x) * p**2 + self.potential(x)
        if self.potential_time is not None:
            value = value + self.potential_time(t)
        if not self.intensity.is_zero():
            with np.errstate(over="ignore", invalid="ignore"):
                value = value + self.intensity(t) * np.expm1(self.jump_size * p)
        return value

    def grad_p(self, x, p, t=0.0):
        p = np.asarray(p, dtype=float)
        value = 2.0 * self.diffusion(x) * p
        if not self.intensity.is_zero():
            with np.errstate(invalid="ignore"):
                value = value + self.intensity(t) * self.jump_size * self._jump_exp(p)
        return _require_finite(value, "grad_p")

    def grad_x(self, x, p, t=0.0):
        p = np.asarray(p, dtype=float)
        value = self.diffusion.derivative(x) * p**2 + self.potential.derivative(x)
        return _require_finite(value, "grad_x")

    def hess_pp(self, x, p, t=0.0):
        p = np.asarray(p, dtype=float)
        value = 2.0 * self.diffusion(x) + 0.0 * p
        if not self.intensity.is_zero():
            with np.errstate(invalid="ignore"):
                value = value + self.intensity(t) * self.jump_size**2 * self._jump_exp(p)
        return _require_finite(value, "hess_pp")

    def cross_xp(self, x, p, t=0.0):
        p = np.asarray(p, dtype=float)
        return _require_finite(2.0 * self.diffusion.derivative(x) * p, "cross_xp")

    def hess_xx(self, x, p, t=0.0):
        p = np.asarray(p, dtype=float)
        value = self.diffusion.second_derivative(x) * p**2 + self.potential.second_derivative(x)
        return _require_finite(value, "hess_xx")

    def parts(self) -> List["KolmogorovFellerSymbol"]:
        config = self.symbol_config
        h_fd = config.h_fd
        zero = ConstantFunctionConfig(value=0.0)
        parts = [
            KolmogorovFellerSymbol(
                QuadraticSymbolConfig(diffusion=config.diffusion, h_fd=h_fd),
                logger=self.logger,
            )
        ]
        if not isinstance(config, QuadraticSymbolConfig):
            parts.append(
                KolmogorovFellerSymbol(
                    PotentialSymbolConfig(
                        diffusion=zero,
                        potential=config.potential,
                        potential_time=config.potential_time,
                        h_fd=h_fd,
                    ),
                    logger=self.logger,
                )
            )
        if isinstance(config, JumpSymbolConfig):
            parts.append(
                KolmogorovFellerSymbol(
                    JumpSymbolConfig(
                        diffusion=zero,
                        potential=zero,
                        intensity=config.intensity,
                        jump_size=config.jump_size,
                        h_fd=h_fd,
                    ),
                    logger=self.logger,
                )
            )
        return parts
