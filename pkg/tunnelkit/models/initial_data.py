from typing import Union

from pydantic import validator

from tunnelkit.models.function import (
    BUILTIN_PHASES,
    ConstantFunctionConfig,
    FunctionConfig,
)
from tunnelkit.models.model import BaseModel


class InitialDataConfig(BaseModel):
    """Cauchy data u|_{t=0} = exp(-S0(x)/eps) * phi0(x)."""

    phase: Union[FunctionConfig, str] = "tanh-plus"
    amplitude: FunctionConfig = ConstantFunctionConfig(value=1.0)

    @validator("phase")
    def phase_resolves(cls, v):
        if isinstance(v, str) and v not in BUILTIN_PHASES:
            raise ValueError(
                f"unknown built-in phase {v!r}; expected one of {sorted(BUILTIN_PHASES)}"
            )
        return v

    def phase_config(self) -> FunctionConfig:
        if isinstance(self.phase, str):
            return BUILTIN_PHASES[self.phase]()
        return self.phase
