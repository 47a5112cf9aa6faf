import numpy as np

from tunnelkit.cli.artifacts import at_least, at_most
from tunnelkit.cli.experiments.base import BaseExperiment, ExperimentOutcome
from tunnelkit.continuity.weak import weak_asymptotic_residual
from tunnelkit.models.experiment import WeakAsymptoticsExperimentConfig


class WeakAsymptoticsExperiment(BaseExperiment[WeakAsymptoticsExperimentConfig]):
    def run(self) -> ExperimentOutcome:
        config = self.get_experiment_config()
        background = config.background
        report = weak_asymptotic_residual(
            lambda x: np.full_like(np.asarray(x, dtype=float), background),
            config.amplitude,
            self.epsilons,
            position=config.position,
        )
        self.logger.info("square-root residual slope %s", report.slope)
        self.writer.write_csv(
            "weak_residual.csv", ("epsilon", "residual"), zip(report.epsilons, report.residuals)
        )
        outcome = ExperimentOutcome(
            checks=[
                at_most("final_residual", abs(report.residuals[-1]), config.max_final_residual)
            ],
            metrics={"slope": report.slope, "final_residual": report.residuals[-1]},
        )
        if len(report.epsilons) > 1:
            outcome.checks.insert(0, at_least("slope", report.slope, config.min_slope))
        return outcome
