import numpy as np

from tunnelkit.cli.artifacts import at_most, holds, strictly_decreasing
from tunnelkit.cli.experiments.base import BaseExperiment, ExperimentOutcome
from tunnelkit.errors import PreconditionError
from tunnelkit.hamflow.initial import InitialData
from tunnelkit.models.experiment import TimeReversalExperimentConfig
from tunnelkit.models.initial_data import InitialDataConfig
from tunnelkit.reference.hopf_lax import QuadraticPhaseEvaluator
from tunnelkit.reference.time_reversal import time_reversal_check


class TimeReversalExperiment(BaseExperiment[TimeReversalExperimentConfig]):
    def run(self) -> ExperimentOutcome:
        config = self.get_experiment_config()
        xs = np.linspace(config.window[0], config.window[1], config.samples)
        evaluator = QuadraticPhaseEvaluator.from_symbol(self.symbol, self.initial_data, config.t)
        reports = [
            time_reversal_check(evaluator, epsilon, xs, h=config.h) for epsilon in self.epsilons
        ]
        self.writer.write_json("time_reversal.json", [report.dict() for report in reports])
        residuals = [report.residual for report in reports]
        outcome = ExperimentOutcome(
            checks=[at_most("residual", residuals[0], config.max_residual)],
            metrics={
                **{
                    f"residual[eps={epsilon:g}]": residual
                    for epsilon, residual in zip(self.epsilons, residuals)
                },
                "residual": residuals[-1],
            },
        )
        if len(residuals) > 1:
            outcome.checks.append(strictly_decreasing("residual_decreasing", residuals))
        if config.refused_phase is not None:
            outcome.checks.append(self._refusal_check())
        return outcome

    def _refusal_check(self):
        """The same check for other data past their first caustic must be refused."""
        config = self.get_experiment_config()
        data = InitialData.from_config(
            InitialDataConfig(
                phase=config.refused_phase, amplitude=self.scenario.initial_data.amplitude
            )
        )
        evaluator = QuadraticPhaseEvaluator.from_symbol(self.symbol, data, config.refused_t)
        xs = np.linspace(config.window[0], config.window[1], config.samples)
        try:
            time_reversal_check(evaluator, self.epsilons[0], xs, h=config.h)
        except PreconditionError as e:
            self.logger.info("refused past the caustic: %s", e)
            return holds("refused_past_caustic", True)
        return holds("refused_past_caustic", False)
