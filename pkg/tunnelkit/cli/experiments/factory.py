import logging
from typing import Optional, Union

from tunnelkit.cli.artifacts import ArtifactWriter
from tunnelkit.cli.experiments.base import BaseExperiment
from tunnelkit.cli.experiments.characteristics import CharacteristicsExperiment
from tunnelkit.cli.experiments.reference import ReferenceExperiment
from tunnelkit.cli.experiments.shock import ShockMergeExperiment, ShockOraclesExperiment
from tunnelkit.cli.experiments.surgery import SurgeryExperiment
from tunnelkit.cli.experiments.time_reversal import TimeReversalExperiment
from tunnelkit.cli.experiments.varadhan import VaradhanExperiment
from tunnelkit.cli.experiments.weak import WeakAsymptoticsExperiment
from tunnelkit.models.experiment import (
    CharacteristicsExperimentConfig,
    ReferenceExperimentConfig,
    ShockMergeExperimentConfig,
    ShockOraclesExperimentConfig,
    SurgeryExperimentConfig,
    TimeReversalExperimentConfig,
    VaradhanExperimentConfig,
    WeakAsymptoticsExperimentConfig,
)
from tunnelkit.models.scenario import Scenario


class ExperimentFactory:
    def create_experiment(
        self,
        scenario: Scenario,
        writer: ArtifactWriter,
        logger: Optional[Union[logging.Logger, logging.LoggerAdapter]] = None,
    ) -> BaseExperiment:
        config = scenario.experiment
        if isinstance(config, CharacteristicsExperimentConfig):
            return CharacteristicsExperiment(config, scenario, writer, logger=logger)
        elif isinstance(config, VaradhanExperimentConfig):
            return VaradhanExperiment(config, scenario, writer, logger=logger)
        elif isinstance(config, ReferenceExperimentConfig):
            return ReferenceExperiment(config, scenario, writer, logger=logger)
        elif isinstance(config, ShockOraclesExperimentConfig):
            return ShockOraclesExperiment(config, scenario, writer, logger=logger)
        elif isinstance(config, ShockMergeExperimentConfig):
            return ShockMergeExperiment(config, scenario, writer, logger=logger)
        elif isinstance(config, WeakAsymptoticsExperimentConfig):
            return WeakAsymptoticsExperiment(config, scenario, writer, logger=logger)
        elif isinstance(config, SurgeryExperimentConfig):
            return SurgeryExperiment(config, scenario, writer, logger=logger)
        elif isinstance(config, TimeReversalExperimentConfig):
            return TimeReversalExperiment(config, scenario, writer, logger=logger)
        raise Exception("Invalid experiment config")


def create_experiment(
    scenario: Scenario,
    writer: ArtifactWriter,
    logger: Optional[Union[logging.Logger, logging.LoggerAdapter]] = None,
) -> BaseExperiment:
    return ExperimentFactory().create_experiment(scenario, writer, logger=logger)
