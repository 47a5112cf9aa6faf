from enum import Enum
from typing import List

from pydantic import validator

from tunnelkit.models.model import TypedModel


class CoefficientRuleType(str, Enum):
    BASE = "coefficient_base"
    ZERO = "coefficient_zero"
    CONSTANT = "coefficient_constant"
    MADELUNG = "coefficient_madelung"
    VELOCITY = "coefficient_velocity"


class CoefficientRuleConfig(TypedModel, type=CoefficientRuleType.BASE.value):
    pass


class ZeroCoefficientConfig(CoefficientRuleConfig, type=CoefficientRuleType.ZERO.value):
    pass


class ConstantCoefficientConfig(
    CoefficientRuleConfig, type=CoefficientRuleType.CONSTANT.value
):
    alpha: float = 0.0


class MadelungCoefficientConfig(
    CoefficientRuleConfig, type=CoefficientRuleType.MADELUNG.value
):
    """a = -H_xp along the flow; sqrt(R) is then the transport amplitude."""


class VelocityCoefficientConfig(
    CoefficientRuleConfig, type=CoefficientRuleType.VELOCITY.value
):
    """a = f(u) with f a polynomial (ascending powers) in the velocity u = H_p.

    On a stratum the same f is applied to the stratum velocity and enters
    the amplitude equation as the reaction term f(v) e.
    """

    coefficients: List[float]

    @validator("coefficients")
    def coefficients_not_empty(cls, v):
        if len(v) == 0:
            raise ValueError("f needs at least one coefficient")
        return v
