from enum import Enum
from typing import List

from pydantic import validator

from tunnelkit.models.model import TypedModel


class FunctionType(str, Enum):
    BASE = "function_base"
    CONSTANT = "function_constant"
    POLYNOMIAL = "function_polynomial"
    SINE = "function_sine"
    GAUSSIAN = "function_gaussian"
    BUMP = "function_bump"
    LOG_COSH = "function_log_cosh"
    SUM = "function_sum"


class FunctionConfig(TypedModel, type=FunctionType.BASE.value):
    pass


class ConstantFunctionConfig(FunctionConfig, type=FunctionType.CONSTANT.value):
    value: float = 0.0


class PolynomialFunctionConfig(FunctionConfig, type=FunctionType.POLYNOMIAL.value):
    # ascending powers: c0 + c1 x + c2 x^2 + ...
    coefficients: List[float]

    @validator("coefficients")
    def coefficients_not_empty(cls, v):
        if len(v) == 0:
            raise ValueError("polynomial needs at least one coefficient")
        return v


class SineFunctionConfig(FunctionConfig, type=FunctionType.SINE.value):
    amplitude: float = 1.0
    frequency: float = 1.0
    phase: float = 0.0
    offset: float = 0.0


class GaussianFunctionConfig(FunctionConfig, type=FunctionType.GAUSSIAN.value):
    amplitude: float = 1.0
    center: float = 0.0
    width: float = 1.0

    @validator("width")
    def width_positive(cls, v):
        if v <= 0:
            raise ValueError("width must be positive")
        return v


class BumpFunctionConfig(FunctionConfig, type=FunctionType.BUMP.value):
    """amplitude * (1 - ((x - center) / half_width)^2)^2 inside the support, 0 outside."""

    amplitude: float = 1.0
    center: float = 0.0
    half_width: float = 1.0

    @validator("half_width")
    def half_width_positive(cls, v):
        if v <= 0:
            raise ValueError("half_width must be positive")
        return v


class LogCoshFunctionConfig(FunctionConfig, type=FunctionType.LOG_COSH.value):
    """slope * width * ln cosh((x - center) / width); the derivative tends to +-slope."""

    slope: float = 1.0
    center: float = 0.0
    width: float = 1.0

    @validator("width")
    def width_positive(cls, v):
        if v <= 0:
            raise ValueError("width must be positive")
        return v


class SumFunctionConfig(FunctionConfig, type=FunctionType.SUM.value):
    terms: List[FunctionConfig]


def tanh_phase(sign: float) -> SumFunctionConfig:
    return SumFunctionConfig(
        terms=[
            PolynomialFunctionConfig(coefficients=[0.0, 1.0]),
            LogCoshFunctionConfig(slope=sign),
        ]
    )


BUILTIN_PHASES = {
    "tanh-plus": lambda: tanh_phase(1.0),
    "tanh-minus": lambda: tanh_phase(-1.0),
}
