import logging
from typing import Optional

from tunnelkit.models.symbol import (
    CustomSymbolConfig,
    JumpSymbolConfig,
    PotentialSymbolConfig,
    QuadraticSymbolConfig,
    SymbolConfig,
)
from tunnelkit.symbol.base import BaseHamiltonianSymbol
from tunnelkit.symbol.custom import CallableSymbol
from tunnelkit.symbol.kolmogorov_feller import KolmogorovFellerSymbol


class SymbolFactory:
    def create_symbol(
        self,
        symbol_config: SymbolConfig,
        logger: Optional[logging.Logger] = None,
    ) -> BaseHamiltonianSymbol:
        if isinstance(
            symbol_config,
            (QuadraticSymbolConfig, PotentialSymbolConfig, JumpSymbolConfig),
        ):
            return KolmogorovFellerSymbol(symbol_config, logger=logger)
        elif isinstance(symbol_config, CustomSymbolConfig):
            return CallableSymbol(symbol_config, logger=logger)
        raise Exception("Invalid symbol config")


def create_symbol(
    symbol_config: SymbolConfig, logger: Optional[logging.Logger] = None
) -> BaseHamiltonianSymbol:
    return SymbolFactory().create_symbol(symbol_config, logger=logger)
