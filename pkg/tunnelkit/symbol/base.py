import logging
from typing import Generic, List, Optional, TypeVar

import numpy as np

from tunnelkit.errors import NonFiniteResultError
from tunnelkit.models.symbol import SymbolConfig

SymbolConfigType = TypeVar("SymbolConfigType", bound=SymbolConfig)


def _require_finite(value, name: str):
    value = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(value)):
        raise NonFiniteResultError(f"{name} produced a non-finite result")
    return value


class BaseHamiltonianSymbol(Generic[SymbolConfigType]):
    """A real Hamiltonian H(x, p, t), vectorised over numpy arrays.

    Subclasses implement ``hamiltonian``; derivatives default to central
    finite differences with step ``h_fd * (1 + |arg|)``.
    """

    time_dependent: bool = True

    def __init__(
        self, symbol_config: SymbolConfigType, logger: Optional[logging.Logger] = None
    ):
        self.symbol_config = symbol_config
        self.logger = logger or logging.getLogger(__name__)

    def get_symbol_config(self) -> SymbolConfigType:
        return self.symbol_config

    def hamiltonian(self, x, p, t):
        raise NotImplementedError

    def eval(self, x, p, t=0.0):
        with np.errstate(over="ignore", invalid="ignore"):
            return _require_finite(self.hamiltonian(x, p, t), "eval")

    def grad_p(self, x, p, t=0.0):
        return _require_finite(self.fd_grad_p(x, p, t), "grad_p")

    def grad_x(self, x, p, t=0.0):
        return _require_finite(self.fd_grad_x(x, p, t), "grad_x")

    def hess_pp(self, x, p, t=0.0):
        return _require_finite(self.fd_hess_pp(x, p, t), "hess_pp")

    def cross_xp(self, x, p, t=0.0):
        return _require_finite(self.fd_cross_xp(x, p, t), "cross_xp")

    def hess_xx(self, x, p, t=0.0):
        return _require_finite(self.fd_hess_xx(x, p, t), "hess_xx")

    def _steps(self, x, p):
        h = self.symbol_config.h_fd
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        return x, p, h * (1.0 + np.abs(x)), h * (1.0 + np.abs(p))

    def _h(self, x, p, t):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.hamiltonian(x, p, t)

    def fd_grad_p(self, x, p, t=0.0):
        x, p, _, hp = self._steps(x, p)
        return (self._h(x, p + hp, t) - self._h(x, p - hp, t)) / (2.0 * hp)

    def fd_grad_x(self, x, p, t=0.0):
        x, p, hx, _ = self._steps(x, p)
        return (self._h(x + hx, p, t) - self._h(x - hx, p, t)) / (2.0 * hx)

    def fd_hess_pp(self, x, p, t=0.0):
        x, p, _, hp = self._steps(x, p)
        return (
            self._h(x, p + hp, t) - 2.0 * self._h(x, p, t) + self._h(x, p - hp, t)
        ) / hp**2

    def fd_hess_xx(self, x, p, t=0.0):
        x, p, hx, _ = self._steps(x, p)
        return (
            self._h(x + hx, p, t) - 2.0 * self._h(x, p, t) + self._h(x - hx, p, t)
        ) / hx**2

    def fd_cross_xp(self, x, p, t=0.0):
        x, p, hx, hp = self._steps(x, p)
        return (
            self._h(x + hx, p + hp, t)
            - self._h(x + hx, p - hp, t)
            - self._h(x - hx, p + hp, t)
            + self._h(x - hx, p - hp, t)
        ) / (4.0 * hx * hp)

    def __add__(self, other: "BaseHamiltonianSymbol") -> "SumSymbol":
        return SumSymbol([self, other])


class SumSymbol(BaseHamiltonianSymbol[SymbolConfig]):
    def __init__(
        self,
        parts: List[BaseHamiltonianSymbol],
        logger: Optional[logging.Logger] = None,
    ):
        super().__init__(
            SymbolConfig(h_fd=parts[0].get_symbol_config().h_fd), logger=logger
        )
        self.parts = parts
        self.time_dependent = any(part.time_dependent for part in parts)

    def hamiltonian(self, x, p, t):
        return sum(part.hamiltonian(x, p, t) for part in self.parts)

    def grad_p(self, x, p, t=0.0):
        return sum(part.grad_p(x, p, t) for part in self.parts)

    def grad_x(self, x, p, t=0.0):
        return sum(part.grad_x(x, p, t) for part in self.parts)

    def hess_pp(self, x, p, t=0.0):
        return sum(part.hess_pp(x, p, t) for part in self.parts)

    def cross_xp(self, x, p, t=0.0):
        return sum(part.cross_xp(x, p, t) for part in self.parts)

    def hess_xx(self, x, p, t=0.0):
        return sum(part.hess_xx(x, p, t) for part in self.parts)
