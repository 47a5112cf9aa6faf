from enum import Enum
from typing import List, Optional

from pydantic import Field, root_validator, validator

from tunnelkit.constants import BLEND_SCALE_RATIO, DEFAULT_LABEL_SPACING, SCHEMA_VERSION
from tunnelkit.models.blend import OffBlendConfig, SurgeryConfig
from tunnelkit.models.coefficient import CoefficientRuleConfig, ZeroCoefficientConfig
from tunnelkit.models.experiment import ExperimentConfig, SurgeryExperimentConfig
from tunnelkit.models.function import ConstantFunctionConfig, FunctionConfig
from tunnelkit.models.initial_data import InitialDataConfig
from tunnelkit.models.model import BaseModel
from tunnelkit.models.reference import ParabolicSchemeConfig
from tunnelkit.models.symbol import (
    CustomSymbolConfig,
    QuadraticSymbolConfig,
    SymbolConfig,
)


class SweepParameter(str, Enum):
    EPSILON = "epsilon"
    BETA = "beta"
    LABEL_SPACING = "label_spacing"
    # the integrator step; output times stay fixed
    DT = "dt"


class GridConfig(BaseModel):
    x_min: float = -3.0
    x_max: float = 3.0
    label_spacing: float = DEFAULT_LABEL_SPACING
    t_max: float = 1.0
    output_dt: float = 0.01
    max_step: Optional[float] = None

    @validator("label_spacing", "t_max", "output_dt")
    def positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @validator("max_step")
    def positive_step(cls, v):
        if v is not None and v <= 0:
            raise ValueError("max_step must be positive")
        return v

    @root_validator(skip_on_failure=True)
    def well_formed(cls, values):
        if values["x_max"] <= values["x_min"]:
            raise ValueError("x_max must exceed x_min")
        if values["label_spacing"] > values["x_max"] - values["x_min"]:
            raise ValueError("label window must hold at least two labels")
        if values["output_dt"] > values["t_max"]:
            raise ValueError("output_dt must not exceed t_max")
        return values


class Scenario(BaseModel):
    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    name: str
    description: str = ""
    symbol: SymbolConfig = QuadraticSymbolConfig()
    initial_data: InitialDataConfig = InitialDataConfig()
    density: FunctionConfig = ConstantFunctionConfig(value=1.0)
    coefficient: CoefficientRuleConfig = ZeroCoefficientConfig()
    grids: GridConfig = GridConfig()
    epsilons: List[float] = [1e-2]
    surgery: SurgeryConfig = SurgeryConfig()
    reference: ParabolicSchemeConfig = ParabolicSchemeConfig()
    experiment: ExperimentConfig
    output_dir: Optional[str] = None

    class Config:
        allow_population_by_field_name = True

    @validator("schema_version")
    def known_schema(cls, v):
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema {v!r}; expected {SCHEMA_VERSION}")
        return v

    @validator("name")
    def name_not_empty(cls, v):
        if not v.strip():
            raise ValueError("name must not be empty")
        return v

    @validator("symbol")
    def declarative_symbol(cls, v):
        if isinstance(v, CustomSymbolConfig):
            raise ValueError("custom symbols are programmatic only")
        if type(v) is SymbolConfig:
            raise ValueError("symbol needs a concrete type")
        return v

    @validator("epsilons")
    def positive_descending(cls, v):
        if not v:
            raise ValueError("at least one epsilon is required")
        if any(e <= 0 for e in v):
            raise ValueError("epsilons must be positive")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError("epsilons must be strictly descending")
        return v

    @validator("experiment")
    def concrete_experiment(cls, v):
        if type(v) is ExperimentConfig:
            raise ValueError("experiment needs a concrete type")
        return v

    @root_validator(skip_on_failure=True)
    def blend_scale(cls, values):
        surgery = values["surgery"]
        if isinstance(values["experiment"], SurgeryExperimentConfig) and not isinstance(
            surgery.profile, OffBlendConfig
        ):
            too_large = [e for e in values["epsilons"] if e * BLEND_SCALE_RATIO > surgery.beta]
            if too_large:
                raise ValueError(
                    f"epsilons {too_large} exceed beta/{BLEND_SCALE_RATIO:g}"
                    f"={surgery.beta / BLEND_SCALE_RATIO!r}"
                )
        return values

    def with_parameter(self, parameter: SweepParameter, value: float) -> "Scenario":
        """A re-validated copy with one sweep parameter replaced."""
        data = self.dict(by_alias=True)
        if parameter == SweepParameter.EPSILON:
            data["epsilons"] = [value]
        elif parameter == SweepParameter.BETA:
            data["surgery"]["beta"] = value
        elif parameter == SweepParameter.LABEL_SPACING:
            data["grids"]["label_spacing"] = value
        elif parameter == SweepParameter.DT:
            data["grids"]["max_step"] = value
        return Scenario.parse_obj(data)
