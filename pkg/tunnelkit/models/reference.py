from pydantic import root_validator, validator

from tunnelkit.constants import DEFAULT_DX_OVER_EPSILON, DEFAULT_RATE_FRACTION
from tunnelkit.models.model import BaseModel


class ParabolicSchemeConfig(BaseModel):
    # 0.5 is Crank-Nicolson, 1.0 fully implicit diffusion
    theta: float = 0.5
    exponential_fitting: bool = False
    dx_over_epsilon: float = DEFAULT_DX_OVER_EPSILON
    x_min: float = -4.0
    x_max: float = 4.0
    rate_fraction: float = DEFAULT_RATE_FRACTION
    check_maximum_principle: bool = False

    @validator("theta")
    def theta_in_unit_interval(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        return v

    @validator("dx_over_epsilon", "rate_fraction")
    def positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @root_validator(skip_on_failure=True)
    def domain_nonempty(cls, values):
        if values["x_max"] <= values["x_min"]:
            raise ValueError("x_max must exceed x_min")
        return values
