import logging
import os
from typing import Optional

from opentelemetry import trace

from tunnelkit import getenv
from tunnelkit.cli.artifacts import SUMMARY_FILE, ArtifactWriter, RunSummary
from tunnelkit.cli.experiments.factory import create_experiment
from tunnelkit.errors import TunnelkitError
from tunnelkit.models.scenario import Scenario
from tunnelkit.utils.logger_adapter import wrap_logger

tracer = trace.get_tracer(__name__)

DEFAULT_OUTPUT_ROOT = "runs"


def resolve_output_dir(scenario: Scenario, output_dir: Optional[str] = None) -> str:
    """Explicit option, then TUNNELKIT_OUTPUT_DIR/<name>, then the scenario's own, then runs/<name>."""
    if output_dir:
        return output_dir
    root = getenv("TUNNELKIT_OUTPUT_DIR")
    if root:
        return os.path.join(root, scenario.name)
    if scenario.output_dir:
        return scenario.output_dir
    return os.path.join(DEFAULT_OUTPUT_ROOT, scenario.name)


class ScenarioRunner:
    def __init__(
        self,
        scenario: Scenario,
        output_dir: Optional[str] = None,
        logger: Optional[logging.Logger] = None,
    ):
        self.scenario = scenario
        self.output_dir = resolve_output_dir(scenario, output_dir)
        self.logger = wrap_logger(logger or logging.getLogger(__name__), scenario.name)

    def run(self) -> RunSummary:
        experiment_type = self.scenario.experiment.type
        with tracer.start_as_current_span("cli.run_scenario") as span:
            span.set_attribute("scenario", self.scenario.name)
            span.set_attribute("experiment", experiment_type)
            writer = ArtifactWriter(self.output_dir, logger=self.logger)
            experiment = create_experiment(self.scenario, writer, logger=self.logger)
            self.logger.info("Running %s into %s", experiment_type, self.output_dir)
            try:
                outcome = experiment.run()
            except TunnelkitError as e:
                self.logger.error("%s: %s", type(e).__name__, e)
                raise
            summary = RunSummary(
                scenario=self.scenario.name,
                experiment=experiment_type,
                passed=all(check.passed for check in outcome.checks),
                checks=outcome.checks,
                metrics=outcome.metrics,
                artifacts=writer.artifacts + [SUMMARY_FILE],
            )
            writer.write_json(SUMMARY_FILE, summary.dict())
            span.set_attribute("passed", summary.passed)
        for check in summary.checks:
            self.logger.info(
                "%s %s: value=%s threshold=%s",
                "PASS" if check.passed else "FAIL",
                check.name,
                check.value,
                check.threshold,
            )
        return summary


def run_scenario(
    scenario: Scenario,
    output_dir: Optional[str] = None,
    logger: Optional[logging.Logger] = None,
) -> RunSummary:
    return ScenarioRunner(scenario, output_dir=output_dir, logger=logger).run()
