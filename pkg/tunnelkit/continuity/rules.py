import logging
from typing import Generic, Optional, TypeVar

import numpy as np
from numpy.polynomial import Polynomial

from tunnelkit.models.coefficient import (
    CoefficientRuleConfig,
    ConstantCoefficientConfig,
    MadelungCoefficientConfig,
    VelocityCoefficientConfig,
    ZeroCoefficientConfig,
)
from tunnelkit.symbol.base import BaseHamiltonianSymbol

CoefficientRuleConfigType = TypeVar("CoefficientRuleConfigType", bound=CoefficientRuleConfig)


class BaseCoefficientRule(Generic[CoefficientRuleConfigType]):
    """The reaction coefficient a of rho_t + (u rho)_x + a rho = 0 along characteristics."""

    def __init__(
        self,
        rule_config: CoefficientRuleConfigType,
        logger: Optional[logging.Logger] = None,
    ):
        self.rule_config = rule_config
        self.logger = logger or logging.getLogger(__name__)

    def get_rule_config(self) -> CoefficientRuleConfigType:
        return self.rule_config

    def rate(self, symbol: BaseHamiltonianSymbol, x, p, t=0.0) -> np.ndarray:
        raise NotImplementedError

    def singular_rate(self, velocity: float) -> float:
        return 0.0


class ZeroCoefficientRule(BaseCoefficientRule[ZeroCoefficientConfig]):
    def rate(self, symbol, x, p, t=0.0):
        return np.zeros_like(np.asarray(x, dtype=float))


class ConstantCoefficientRule(BaseCoefficientRule[ConstantCoefficientConfig]):
    def rate(self, symbol, x, p, t=0.0):
        return np.full_like(np.asarray(x, dtype=float), self.rule_config.alpha)


class MadelungCoefficientRule(BaseCoefficientRule[MadelungCoefficientConfig]):
    def rate(self, symbol, x, p, t=0.0):
        return -symbol.cross_xp(x, p, t)


class VelocityCoefficientRule(BaseCoefficientRule[VelocityCoefficientConfig]):
    def __init__(
        self,
        rule_config: VelocityCoefficientConfig,
        logger: Optional[logging.Logger] = None,
    ):
        super().__init__(rule_config, logger=logger)
        self.f = Polynomial(rule_config.coefficients)

    def rate(self, symbol, x, p, t=0.0):
        return self.f(symbol.grad_p(x, p, t))

    def singular_rate(self, velocity: float) -> float:
        return float(self.f(velocity))


class CoefficientRuleFactory:
    def create_rule(
        self,
        rule_config: CoefficientRuleConfig,
        logger: Optional[logging.Logger] = None,
    ) -> BaseCoefficientRule:
        if isinstance(rule_config, ZeroCoefficientConfig):
            return ZeroCoefficientRule(rule_config, logger=logger)
        elif isinstance(rule_config, ConstantCoefficientConfig):
            return ConstantCoefficientRule(rule_config, logger=logger)
        elif isinstance(rule_config, MadelungCoefficientConfig):
            return MadelungCoefficientRule(rule_config, logger=logger)
        elif isinstance(rule_config, VelocityCoefficientConfig):
            return VelocityCoefficientRule(rule_config, logger=logger)
        raise Exception("Invalid coefficient rule config")


def create_coefficient_rule(
    rule_config: CoefficientRuleConfig, logger: Optional[logging.Logger] = None
) -> BaseCoefficientRule:
    return CoefficientRuleFactory().create_rule(rule_config, logger=logger)
