from enum import Enum
from typing import Literal, Optional, Union

from pydantic import validator

from tunnelkit.constants import DEFAULT_BETA
from tunnelkit.models.model import BaseModel, TypedModel


class BlendProfileType(str, Enum):
    BASE = "blend_base"
    LOGISTIC = "blend_logistic"
    OFF = "blend_off"


class BlendProfileConfig(TypedModel, type=BlendProfileType.BASE.value):
    pass


class LogisticBlendConfig(BlendProfileConfig, type=BlendProfileType.LOGISTIC.value):
    """B(z) = 1 / (1 + exp(-z))."""


class OffBlendConfig(BlendProfileConfig, type=BlendProfileType.OFF.value):
    """B = 0: plain characteristics of the modified data, no capture."""


class BlockVelocityRule(str, Enum):
    INSERTION_ENDPOINTS = "insertion_endpoints"
    SIDE_STATES = "side_states"


class SurgeryConfig(BaseModel):
    profile: BlendProfileConfig = LogisticBlendConfig()
    beta: float = DEFAULT_BETA
    shift: Union[float, Literal["auto"]] = "auto"
    c_rule: BlockVelocityRule = BlockVelocityRule.INSERTION_ENDPOINTS
    # None picks beta / 2, halved while the back-flowed segment refolds
    backflow_time: Optional[float] = None

    @validator("beta")
    def positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @validator("shift")
    def shift_non_negative(cls, v):
        if v != "auto" and v < 0:
            raise ValueError("shift constant A must be non-negative or 'auto'")
        return v
