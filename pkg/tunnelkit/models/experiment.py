from enum import Enum
from typing import Literal, Optional, Tuple

from pydantic import root_validator, validator

from tunnelkit.constants import DEFAULT_PHASE_POINTS
from tunnelkit.models.function import BUILTIN_PHASES
from tunnelkit.models.model import TypedModel


class ExperimentType(str, Enum):
    BASE = "experiment_base"
    CHARACTERISTICS = "experiment_characteristics"
    VARADHAN = "experiment_varadhan"
    REFERENCE = "experiment_reference"
    SHOCK_ORACLES = "experiment_shock_oracles"
    SHOCK_MERGE = "experiment_shock_merge"
    WEAK_ASYMPTOTICS = "experiment_weak_asymptotics"
    SURGERY = "experiment_surgery"
    TIME_REVERSAL = "experiment_time_reversal"


class ExperimentConfig(TypedModel, type=ExperimentType.BASE.value):
    pass


def _window(cls, v: Tuple[float, float]) -> Tuple[float, float]:
    if v[1] <= v[0]:
        raise ValueError("window must be (lo, hi) with lo < hi")
    return v


class CharacteristicsExperimentConfig(
    ExperimentConfig, type=ExperimentType.CHARACTERISTICS.value
):
    """Fan, caustics, final global phase and its singular support."""

    expect_caustic: Optional[bool] = None
    expected_t_star: Optional[float] = None
    expected_label: Optional[float] = None
    t_star_tol: float = 1e-3
    label_tol: float = 1e-2
    min_jacobian: Optional[float] = None
    phase_points: int = DEFAULT_PHASE_POINTS
    # every n-th label goes to fan.csv
    label_stride: int = 10

    @validator("label_stride", "phase_points")
    def positive_count(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v


class VaradhanExperimentConfig(ExperimentConfig, type=ExperimentType.VARADHAN.value):
    """-eps ln u of the reference solution against the min-action phase."""

    t: float = 0.4
    window: Tuple[float, float] = (-1.0, 1.0)
    samples: int = 41
    bound_factor: float = 5.0
    # points closer than this to a kink of the phase are left out
    kink_distance: float = 0.1
    kink_window: Optional[Tuple[float, float]] = None
    kink_tol: float = 0.05
    leading_term_points: int = 0
    leading_term_band: float = 10.0

    _check_window = validator("window", allow_reuse=True)(_window)

    @validator("t")
    def positive_time(cls, v):
        if v <= 0:
            raise ValueError("t must be positive")
        return v

    @validator("kink_window")
    def kink_window_ordered(cls, v):
        return None if v is None else _window(cls, v)


class ReferenceExperimentConfig(ExperimentConfig, type=ExperimentType.REFERENCE.value):
    """Heat kernel against the finite-difference solver on Gaussian data."""

    width: float = 0.3
    t: float = 0.5
    relative_tol: float = 1e-3
    mass_tol: float = 1e-4

    @validator("width", "t")
    def positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v


class ShockOraclesExperimentConfig(
    ExperimentConfig, type=ExperimentType.SHOCK_ORACLES.value
):
    """Rankine-Hugoniot and delta-amplitude closed forms."""

    samples: int = 100
    seed: int = 0
    momentum_range: float = 2.0
    velocity_tol: float = 1e-12
    t: float = 1.0
    dt: float = 1e-3
    flux_tol: float = 1e-6
    reaction: float = -1.0
    reaction_tol: float = 1e-4

    @validator("reaction")
    def reaction_not_zero(cls, v):
        if v == 0:
            raise ValueError("reaction must be non-zero; the flux-only oracle covers f = 0")
        return v

    @root_validator(skip_on_failure=True)
    def step_fits(cls, values):
        if values["dt"] <= 0 or values["t"] < values["dt"]:
            raise ValueError("need 0 < dt <= t")
        return values


class ShockMergeExperimentConfig(ExperimentConfig, type=ExperimentType.SHOCK_MERGE.value):
    """Tracked strata of the scenario's data; expects Kirchhoff merges."""

    min_merges: int = 1
    kirchhoff_tol: float = 1e-12
    mass_tol: float = 1e-3


class WeakAsymptoticsExperimentConfig(
    ExperimentConfig, type=ExperimentType.WEAK_ASYMPTOTICS.value
):
    """Square-root functional of the smoothed delta; eps come from the scenario."""

    amplitude: float = 0.1
    background: float = 1.0
    position: float = 0.0
    min_slope: float = 0.4
    max_final_residual: float = 1e-2

    @validator("amplitude", "background")
    def non_negative(cls, v):
        if v < 0:
            raise ValueError("must be non-negative")
        return v


class SurgeryExperimentConfig(ExperimentConfig, type=ExperimentType.SURGERY.value):
    """Blended characteristics for every scenario eps.

    ``homogeneous`` inserts into the initial data around ``x0_star``;
    ``inhomogeneous`` cuts the first fold and flows the joined curve back.
    """

    construction: Literal["homogeneous", "inhomogeneous"] = "homogeneous"
    x0_star: float = 0.0
    # inhomogeneous: time after the back-flow start; defaults to the scenario horizon
    duration: Optional[float] = None
    floor_stability: float = 2.0


class TimeReversalExperimentConfig(
    ExperimentConfig, type=ExperimentType.TIME_REVERSAL.value
):
    """Laplace reconstruction of the data from the exact phase at time t."""

    t: float = 0.5
    window: Tuple[float, float] = (-1.0, 1.0)
    samples: int = 21
    h: float = 1e-3
    max_residual: float = 0.1
    refused_phase: Optional[str] = None
    refused_t: float = 1.0

    _check_window = validator("window", allow_reuse=True)(_window)

    @validator("refused_phase")
    def builtin_phase(cls, v):
        if v is not None and v not in BUILTIN_PHASES:
            raise ValueError(f"unknown built-in phase {v!r}")
        return v
