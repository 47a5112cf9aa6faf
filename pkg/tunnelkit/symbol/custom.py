import logging
from typing import Optional

import numpy as np

from tunnelkit.models.symbol import CustomSymbolConfig
from tunnelkit.symbol.base import BaseHamiltonianSymbol, _require_finite


class CallableSymbol(BaseHamiltonianSymbol[CustomSymbolConfig]):
    def __init__(
        self,
        symbol_config: CustomSymbolConfig,
        logger: Optional[logging.Logger] = None,
    ):
        super().__init__(symbol_config, logger=logger)
        self.time_dependent = symbol_config.time_dependent

    def hamiltonian(self, x, p, t):
        return self.symbol_config.hamiltonian(
            np.asarray(x, dtype=float), np.asarray(p, dtype=float), t
        )

    def grad_p(self, x, p, t=0.0):
        if self.symbol_config.grad_p is None:
            return super().grad_p(x, p, t)
        return _require_finite(self.symbol_config.grad_p(x, p, t), "grad_p")

    def grad_x(self, x, p, t=0.0):
        if self.symbol_config.grad_x is None:
            return super().grad_x(x, p, t)
        return _require_finite(self.symbol_config.grad_x(x, p, t), "grad_x")

    def hess_pp(self, x, p, t=0.0):
        if self.symbol_config.hess_pp is None:
            return super().hess_pp(x, p, t)
        return _require_finite(self.symbol_config.hess_pp(x, p, t), "hess_pp")
