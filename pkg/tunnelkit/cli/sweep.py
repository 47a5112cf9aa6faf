import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

from opentelemetry import trace
from tqdm import tqdm

from tunnelkit.cli.artifacts import ArtifactWriter, RunSummary
from tunnelkit.cli.runner import resolve_output_dir, run_scenario
from tunnelkit.models.scenario import Scenario, SweepParameter
from tunnelkit.utils.logger_adapter import wrap_logger

tracer = trace.get_tracer(__name__)

SWEEP_FILE = "sweep.csv"


def loglog_slope(v1: float, v2: float, m1: Optional[float], m2: Optional[float]) -> float:
    if m1 is None or m2 is None or m1 <= 0 or m2 <= 0 or v1 <= 0 or v2 <= 0 or v1 == v2:
        return math.nan
    return math.log(m2 / m1) / math.log(v2 / v1)


def difference_ratio(m0: Optional[float], m1: Optional[float], m2: Optional[float]) -> float:
    """(m0 - m1) / (m1 - m2); 2^order for a halving sequence of a converging metric."""
    if m0 is None or m1 is None or m2 is None or m1 == m2:
        return math.nan
    return (m0 - m1) / (m1 - m2)


def sweep_table(
    parameter: SweepParameter, values: Sequence[float], summaries: Sequence[RunSummary]
) -> List[Dict[str, object]]:
    """One row per value: metrics, slope to the next row and successive-difference ratio."""
    names: List[str] = []
    for summary in summaries:
        names.extend(name for name in summary.metrics if name not in names)
    rows: List[Dict[str, object]] = []
    for i, (value, summary) in enumerate(zip(values, summaries)):
        row: Dict[str, object] = {parameter.value: value, "passed": summary.passed}
        for name in names:
            metric = summary.metrics.get(name)
            row[name] = metric
            if i + 1 < len(values):
                row[f"{name}:slope"] = loglog_slope(
                    value, values[i + 1], metric, summaries[i + 1].metrics.get(name)
                )
            if i + 2 < len(values):
                row[f"{name}:ratio"] = difference_ratio(
                    metric,
                    summaries[i + 1].metrics.get(name),
                    summaries[i + 2].metrics.get(name),
                )
        rows.append(row)
    return rows


def sweep(
    scenario: Scenario,
    parameter: SweepParameter,
    values: Sequence[float],
    output_dir: Optional[str] = None,
    max_workers: Optional[int] = None,
    logger: Optional[logging.Logger] = None,
) -> List[Dict[str, object]]:
    """Run one variant per value (concurrently when max_workers > 1) and tabulate."""
    logger = logger or logging.getLogger(__name__)
    root = os.path.join(resolve_output_dir(scenario, output_dir), f"sweep-{parameter.value}")
    variants = [scenario.with_parameter(parameter, value) for value in values]
    wrap_logger(logger, scenario.name).info(
        "Sweeping %s over %d values", parameter.value, len(values)
    )

    def run_variant(index: int) -> RunSummary:
        variant_dir = os.path.join(root, f"{index:03d}")
        return run_scenario(variants[index], output_dir=variant_dir, logger=logger)

    with tracer.start_as_current_span("cli.sweep"):
        with ThreadPoolExecutor(max_workers=max_workers or 1) as executor:
            summaries = list(
                tqdm(
                    executor.map(run_variant, range(len(variants))),
                    total=len(variants),
                    desc=f"{scenario.name}:{parameter.value}",
                    disable=None,
                )
            )
    rows = sweep_table(parameter, values, summaries)
    ArtifactWriter(root, logger=logger).write_dict_rows(SWEEP_FILE, rows)
    return rows
