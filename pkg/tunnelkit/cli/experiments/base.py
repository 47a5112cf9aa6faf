import logging
from dataclasses import dataclass, field
from typing import Dict, Generic, List, Optional, TypeVar, Union

import numpy as np

from tunnelkit.cli.artifacts import ArtifactWriter, Check
from tunnelkit.continuity.rules import BaseCoefficientRule, create_coefficient_rule
from tunnelkit.hamflow.fan import TrajectoryFan, evolve_fan
from tunnelkit.hamflow.initial import InitialData, InitialManifold, uniform_labels
from tunnelkit.manifold.branches import branch_decompose
from tunnelkit.manifold.curve import snapshot
from tunnelkit.manifold.phase import GlobalPhase, min_action
from tunnelkit.models.experiment import ExperimentConfig
from tunnelkit.models.scenario import Scenario
from tunnelkit.symbol.base import BaseHamiltonianSymbol
from tunnelkit.symbol.factory import create_symbol
from tunnelkit.symbol.functions import ScalarFunction, create_function

ExperimentConfigType = TypeVar("ExperimentConfigType", bound=ExperimentConfig)


@dataclass
class ExperimentOutcome:
    checks: List[Check] = field(default_factory=list)
    metrics: Dict[str, Optional[float]] = field(default_factory=dict)


def time_grid(t_max: float, output_dt: float, t0: float = 0.0) -> np.ndarray:
    """Equally spaced times from t0 to t_max, as close to output_dt as fits."""
    steps = max(1, int(round((t_max - t0) / output_dt)))
    return np.linspace(t0, t_max, steps + 1)


class BaseExperiment(Generic[ExperimentConfigType]):
    def __init__(
        self,
        experiment_config: ExperimentConfigType,
        scenario: Scenario,
        writer: ArtifactWriter,
        logger: Optional[Union[logging.Logger, logging.LoggerAdapter]] = None,
    ):
        self.experiment_config = experiment_config
        self.scenario = scenario
        self.writer = writer
        self.logger = logger or logging.getLogger(__name__)
        self.symbol: BaseHamiltonianSymbol = create_symbol(scenario.symbol)
        self.initial_data = InitialData.from_config(scenario.initial_data)

    def get_experiment_config(self) -> ExperimentConfigType:
        return self.experiment_config

    @property
    def epsilons(self) -> List[float]:
        return list(self.scenario.epsilons)

    def density(self) -> ScalarFunction:
        return create_function(self.scenario.density)

    def coefficient_rule(self) -> BaseCoefficientRule:
        return create_coefficient_rule(self.scenario.coefficient, logger=self.logger)

    def labels(self) -> np.ndarray:
        grids = self.scenario.grids
        return uniform_labels(grids.x_min, grids.x_max, grids.label_spacing)

    def tgrid(self, t_max: Optional[float] = None) -> np.ndarray:
        grids = self.scenario.grids
        return time_grid(grids.t_max if t_max is None else t_max, grids.output_dt)

    def evolve(self, t_max: Optional[float] = None) -> TrajectoryFan:
        manifold = InitialManifold.from_initial_data(self.initial_data, self.labels())
        return evolve_fan(
            self.symbol, manifold, self.tgrid(t_max), max_step=self.scenario.grids.max_step
        )

    def global_phase(
        self, fan: TrajectoryFan, t: float, xs, fields: Optional[Dict[str, np.ndarray]] = None
    ) -> GlobalPhase:
        return min_action(branch_decompose(snapshot(fan, t, fields)), xs)

    def run(self) -> ExperimentOutcome:
        raise NotImplementedError
